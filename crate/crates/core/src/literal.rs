//! Text forms: field specs, element codes, `poly:[..]`, `lin:[..]`,
//! `plin:[..]`, `span{..}`, `pspan{..}` and `key=value` blocks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linearized::{LinPoly, Linearity};
use crate::poly::Poly;
use crate::subspace::SubspaceBasis;

fn int_list(token: &str, body: &str) -> Result<Vec<u32>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::parse(token, format!("'{}' is not a non-negative integer", s.trim())))
        })
        .collect()
}

fn bracketed<'a>(token: &'a str, prefix: &str, open: char, close: char) -> Option<&'a str> {
    let rest = token.strip_prefix(prefix)?;
    let rest = rest.strip_prefix(open)?;
    rest.strip_suffix(close)
}

/// `p:m:n[:modq=c0,c1,..][:modqn=e0,e1,..]`.
pub fn parse_field(spec: &str) -> Result<FieldTower> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    if parts.len() < 3 {
        return Err(Error::parse(spec, "expected p:m:n"));
    }
    let num = |s: &str| -> Result<u32> {
        s.parse::<u32>()
            .map_err(|_| Error::parse(spec, format!("'{s}' is not a positive integer")))
    };
    let (p, m, n) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    if m == 0 || n == 0 {
        return Err(Error::parse(spec, "degrees must be at least 1"));
    }
    let mut modq = None;
    let mut modqn = None;
    for extra in &parts[3..] {
        match extra.split_once('=') {
            Some(("modq", v)) => modq = Some(int_list(spec, v)?),
            Some(("modqn", v)) => modqn = Some(int_list(spec, v)?),
            _ => return Err(Error::parse(spec, format!("unknown field option '{extra}'"))),
        }
    }
    FieldTower::with_moduli(p, m, n, modq.as_deref(), modqn.as_deref())
}

pub fn parse_elem(t: &FieldTower, token: &str) -> Result<Elem> {
    let v: u64 = token
        .trim()
        .parse()
        .map_err(|_| Error::parse(token, "expected an element code"))?;
    if v >= t.order() {
        return Err(Error::parse(token, format!("element code must be below {}", t.order())));
    }
    Ok(Elem(v as u32))
}

/// `poly:[c0,c1,..]`, lowest degree first; `x` is accepted for poly:[0,1].
pub fn parse_poly(t: &FieldTower, token: &str) -> Result<Poly> {
    let token = token.trim();
    if token == "x" {
        return Ok(Poly::x());
    }
    let body = bracketed(token, "poly:", '[', ']')
        .ok_or_else(|| Error::parse(token, "expected poly:[c0,c1,...]"))?;
    let codes = int_list(token, body)?;
    let p = Poly::from_codes(&codes);
    p.check(t).map_err(|e| Error::parse(token, e.to_string()))?;
    Ok(p)
}

/// `lin:[..]` with n coefficients or `plin:[..]` with mn coefficients.
pub fn parse_linpoly(t: &FieldTower, token: &str) -> Result<LinPoly> {
    let token = token.trim();
    let (lin, body) = if let Some(b) = bracketed(token, "lin:", '[', ']') {
        (Linearity::Q, b)
    } else if let Some(b) = bracketed(token, "plin:", '[', ']') {
        (Linearity::P, b)
    } else {
        return Err(Error::parse(token, "expected lin:[...] or plin:[...]"));
    };
    let codes = int_list(token, body)?;
    LinPoly::from_codes(t, lin, &codes).map_err(|e| Error::parse(token, e.to_string()))
}

/// `span{e1,..}` over F_q or `pspan{e1,..}` over F_p.
pub fn parse_span(t: &FieldTower, token: &str) -> Result<SubspaceBasis> {
    let token = token.trim();
    let (lin, body) = if let Some(b) = bracketed(token, "span", '{', '}') {
        (Linearity::Q, b)
    } else if let Some(b) = bracketed(token, "pspan", '{', '}') {
        (Linearity::P, b)
    } else {
        return Err(Error::parse(token, "expected span{...} or pspan{...}"));
    };
    let elems = int_list(token, body)?
        .into_iter()
        .map(|c| parse_elem(t, &c.to_string()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubspaceBasis::span(t, lin, &elems))
}

/// `key=value` lines; `#` starts a comment and keys must not repeat.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    map: BTreeMap<String, String>,
}

/// Greek spellings accepted as parameter names.
fn canonical_key(k: &str) -> &str {
    match k {
        "α" => "alpha",
        "γ" => "gamma",
        "δ" => "delta",
        "φ" => "phi",
        "ψ" => "psi",
        "ψ̄" | "psi_bar" => "psibar",
        other => other,
    }
}

impl Params {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(line, "expected key=value"))?;
            let key = canonical_key(k.trim()).to_string();
            if map.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::parse(line, format!("duplicate key '{key}'")));
            }
        }
        Ok(Params { map })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::parse(key, "missing parameter"))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|s| s.as_str())
    }

    pub fn elem(&self, t: &FieldTower, key: &str) -> Result<Elem> {
        parse_elem(t, self.require(key)?)
    }

    pub fn elem_or(&self, t: &FieldTower, key: &str, default: Elem) -> Result<Elem> {
        self.get(key).map_or(Ok(default), |v| parse_elem(t, v))
    }

    pub fn poly(&self, t: &FieldTower, key: &str) -> Result<Poly> {
        parse_poly(t, self.require(key)?)
    }

    pub fn poly_or(&self, t: &FieldTower, key: &str, default: Poly) -> Result<Poly> {
        self.get(key).map_or(Ok(default), |v| parse_poly(t, v))
    }

    pub fn linpoly(&self, t: &FieldTower, key: &str) -> Result<LinPoly> {
        parse_linpoly(t, self.require(key)?)
    }

    pub fn int(&self, key: &str) -> Result<u64> {
        let v = self.require(key)?;
        v.parse().map_err(|_| Error::parse(v, format!("{key} must be a non-negative integer")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_round_trip() {
        let t = parse_field("2:1:3").unwrap();
        assert_eq!(t.spec_string(), "2:1:3:modq=0,1:modqn=1,1,0,1");
        assert_eq!(parse_field(&t.spec_string()).unwrap(), t);
        assert!(matches!(parse_field("4:1:2"), Err(Error::NotPrime(4))));
        assert!(matches!(parse_field("2:1"), Err(Error::Parse { .. })));
        assert!(parse_field("2:1:3:modqn=1,0,0,1").is_err());
    }

    #[test]
    fn literal_round_trips() {
        let t = parse_field("3:1:2").unwrap();
        let p = parse_poly(&t, "poly:[0,1,2]").unwrap();
        assert_eq!(parse_poly(&t, &p.to_string()).unwrap(), p);
        assert_eq!(parse_poly(&t, "x").unwrap().to_string(), "poly:[0,1]");
        assert!(parse_poly(&t, "poly:[9]").is_err());
        let l = parse_linpoly(&t, "lin:[2,1]").unwrap();
        assert_eq!(l.to_string(), "lin:[2,1]");
        assert!(parse_linpoly(&t, "lin:[1,2,3]").is_err());
        let s = parse_span(&t, "span{4,8}").unwrap();
        assert_eq!(parse_span(&t, &s.to_string()).unwrap(), s);
    }

    #[test]
    fn params_block() {
        let p = Params::parse("# header\nα = 1\nG=x\n\nc=1 # trailing\n").unwrap();
        assert_eq!(p.get("alpha"), Some("1"));
        assert_eq!(p.get("c"), Some("1"));
        assert!(Params::parse("a=1\na=2").is_err());
        assert!(Params::parse("novalue").is_err());
    }
}
