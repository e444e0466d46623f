//! Explicit inverses of structured permutation polynomials.
//!
//! Each constructor checks its hypotheses exhaustively, assembles the inverse
//! as an evaluation procedure and certifies it against the forward table.

mod bilinear;
mod decomposition;
mod linear_power;
mod multiterm;
mod params;
mod shifted;
mod trace_translate;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linearized::LinPoly;
use crate::poly::{interpolate_values, tabulate, Poly};

pub use bilinear::{bilinear_indicators, invert_bilinear_general, BilinearIndicators};
pub use decomposition::{
    check_split_conditions, invert_additive_case, invert_binomial_power, invert_binomial_tq,
    invert_split_general, AdditivePreset, SplitInstance,
};
pub use linear_power::{invert_frobenius_difference_power, invert_l1l2};
pub use multiterm::{Branch, MultitermInstance, Preimage, Term};
pub use params::run_family;
pub use shifted::{invert_shifted_frobenius, shifted_b_coeffs, wu_b_coeffs};
pub use trace_translate::{invert_binomial_translate, invert_trace_translate};

/// Evaluation procedure of an assembled inverse.
pub type Formula = Arc<dyn Fn(&FieldTower, Elem) -> Elem + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// h(ψ(x))φ(x) + g(ψ(x)) with commuting linear ψ, ψ̄.
    SplitLinear,
    /// The same shape with ψ̄∘g vanishing on ψ(F).
    SplitAdditive,
    ConstantH,
    /// h(T(x))φ(x) + Q(G(T(x))).
    Qt,
    /// h(Q(x))φ(x) + T(G(Q(x))).
    Tq,
    /// h(Q(x))φ(x) + N(G(Q(x))).
    Nq,
    /// c(ax^q + bx) + T(G(Q(x))) over F_{q^2}.
    BinomialTq,
    /// φ(x) + γG(T(x)).
    TraceTranslate,
    /// (ax^q + bx) + γT(x) over F_{q^2}.
    BinomialTranslate,
    /// G(L1(x))^s + L2(x).
    LinearPower,
    /// x + (x^{q^k} - x + δ)^s.
    FrobeniusDifferencePower,
    /// ax^q + bx + (x^q - x)^k over F_{q^2}.
    BinomialPower,
    Multiterm,
    /// L1(x) + L2(x)w(L3(x)).
    ThreeLinear,
    /// H(x) + x g(T(x)).
    AdditiveTrace,
    /// ax^p + x g(T(x)).
    Bilinear,
    /// c(x^q - x + T(αx)) + G(T(αx))^q - G(T(αx)).
    ShiftedFrobenius,
}

impl Family {
    pub const ALL: [Family; 17] = [
        Family::SplitLinear,
        Family::SplitAdditive,
        Family::ConstantH,
        Family::Qt,
        Family::Tq,
        Family::Nq,
        Family::BinomialTq,
        Family::TraceTranslate,
        Family::BinomialTranslate,
        Family::LinearPower,
        Family::FrobeniusDifferencePower,
        Family::BinomialPower,
        Family::Multiterm,
        Family::ThreeLinear,
        Family::AdditiveTrace,
        Family::Bilinear,
        Family::ShiftedFrobenius,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::SplitLinear => "split-linear",
            Family::SplitAdditive => "split-additive",
            Family::ConstantH => "constant-h",
            Family::Qt => "qt",
            Family::Tq => "tq",
            Family::Nq => "nq",
            Family::BinomialTq => "binomial-tq",
            Family::TraceTranslate => "trace-translate",
            Family::BinomialTranslate => "binomial-translate",
            Family::LinearPower => "linear-power",
            Family::FrobeniusDifferencePower => "frobenius-difference-power",
            Family::BinomialPower => "binomial-power",
            Family::Multiterm => "multiterm",
            Family::ThreeLinear => "three-linear",
            Family::AdditiveTrace => "additive-trace",
            Family::Bilinear => "bilinear",
            Family::ShiftedFrobenius => "shifted-frobenius",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "simple-proof" {
            return Ok(Family::ShiftedFrobenius);
        }
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.tag() == s)
            .ok_or_else(|| Error::parse(s, "unknown family"))
    }
}

/// A named second route to the same inverse and whether it agreed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub name: String,
    pub agrees: bool,
}

/// An assembled inverse, its interpolated polynomial and the outcome of the
/// exhaustive composition check.
#[derive(Clone)]
pub struct InverseCertificate {
    pub family: Family,
    pub forward: Poly,
    pub inverse: Poly,
    /// Both f⁻¹∘f and f∘f⁻¹ are the identity on the whole field.
    pub verified: bool,
    pub counterexample: Option<Elem>,
    pub cross_checks: Vec<CrossCheck>,
    pub(crate) formula: Formula,
}

impl fmt::Debug for InverseCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InverseCertificate")
            .field("family", &self.family)
            .field("forward", &self.forward)
            .field("inverse", &self.inverse)
            .field("verified", &self.verified)
            .field("counterexample", &self.counterexample)
            .field("cross_checks", &self.cross_checks)
            .finish()
    }
}

impl InverseCertificate {
    /// Runs the assembled formula at one point.
    pub fn eval(&self, t: &FieldTower, y: Elem) -> Elem {
        (self.formula)(t, y)
    }

    pub fn cross_checks_agree(&self) -> bool {
        self.cross_checks.iter().all(|c| c.agrees)
    }
}

impl fmt::Display for InverseCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family={} verified={} inverse={}",
            self.family, self.verified, self.inverse
        )?;
        if let Some(c) = self.counterexample {
            write!(f, " counterexample={c}")?;
        }
        for c in &self.cross_checks {
            write!(f, " check.{}={}", c.name, c.agrees)?;
        }
        write!(f, " forward={}", self.forward)
    }
}

/// Tabulates `formula`, checks both composition directions against the
/// forward table and compares every alternate route.
pub fn certify(
    t: &FieldTower,
    family: Family,
    forward: &[Elem],
    formula: Formula,
    alternates: Vec<(&str, Formula)>,
) -> Result<InverseCertificate> {
    t.check_desk()?;
    let inv = tabulate(t, |x| formula(t, x));
    let counterexample = (0..forward.len()).map(|i| Elem(i as u32)).find(|&x| {
        inv[forward[x.0 as usize].0 as usize] != x || forward[inv[x.0 as usize].0 as usize] != x
    });
    let cross_checks = alternates
        .into_iter()
        .map(|(name, alt)| CrossCheck {
            name: name.to_string(),
            agrees: tabulate(t, |x| alt(t, x)) == inv,
        })
        .collect();
    Ok(InverseCertificate {
        family,
        forward: interpolate_values(t, forward)?,
        inverse: interpolate_values(t, &inv)?,
        verified: counterexample.is_none(),
        counterexample,
        cross_checks,
        formula,
    })
}

/// Value table of f, failing with the colliding pair when f is not a permutation.
pub(crate) fn permutation_table(
    t: &FieldTower,
    f: impl Fn(Elem) -> Elem + Sync,
) -> Result<Vec<Elem>> {
    t.check_desk()?;
    let vals = tabulate(t, f);
    if let Some((a, b)) = crate::poly::find_collision(&vals) {
        return Err(Error::NotPermutation { a, b });
    }
    Ok(vals)
}

pub(crate) fn require_fq(t: &FieldTower, what: &str, e: Elem) -> Result<()> {
    t.check(e)?;
    if t.in_fq(e) {
        Ok(())
    } else {
        Err(Error::hypothesis(format!("{what} lies in F_q"), Some(e)))
    }
}

pub(crate) fn require_fq_poly(t: &FieldTower, what: &str, g: &Poly) -> Result<()> {
    g.check(t)?;
    match g.coeffs().iter().find(|c| !t.in_fq(**c)) {
        Some(&c) => Err(Error::hypothesis(format!("{what} has coefficients in F_q"), Some(c))),
        None => Ok(()),
    }
}

pub(crate) fn require_fq_lin(t: &FieldTower, what: &str, l: &LinPoly) -> Result<()> {
    match l.coeffs().iter().find(|c| !t.in_fq(**c)) {
        Some(&c) => Err(Error::hypothesis(format!("{what} has coefficients in F_q"), Some(c))),
        None => Ok(()),
    }
}

/// Appends a second route, compared with the certified inverse on every element.
pub(crate) fn add_cross_check(
    t: &FieldTower,
    cert: &mut InverseCertificate,
    name: &str,
    alt: impl Fn(Elem) -> Elem + Sync,
) {
    let agrees = t.elements().all(|x| alt(x) == cert.eval(t, x));
    cert.cross_checks.push(CrossCheck {
        name: name.to_string(),
        agrees,
    });
}

/// The polynomial inducing `f` on the whole field.
pub(crate) fn poly_of(t: &FieldTower, f: impl Fn(Elem) -> Elem + Sync) -> Result<Poly> {
    t.check_desk()?;
    interpolate_values(t, &tabulate(t, f))
}
