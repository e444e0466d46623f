//! f(x) = g(ψ(x)) + Σ (L_i(x) + δ_i) h_i(ψ(x)), inverted point by point
//! through φ_y = Σ h_i(y) L_i with y = f̄⁻¹(ψ(x)).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::{certify, permutation_table, require_fq_lin, require_fq_poly, Family, InverseCertificate};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linearized::{
    common_level, image, kernel, lin_inverse_full, s_psi, subspace_inverse, LinPoly, Linearity,
};
use crate::poly::{invert_on, invert_table, Poly};
use crate::subspace::SubspaceBasis;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub l: LinPoly,
    pub delta: Elem,
    pub h: Poly,
}

/// Which preimage formula produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// φ_y permutes the field: φ_y⁻¹(x - g(y) - Σ δ_i h_i(y)).
    FullField,
    /// ψ = T and p ∤ n: n⁻¹y plus the inverse of φ_y on ker(T).
    TraceSplit,
    /// ker(φ_y) ∩ ψ(S_ψ) = {0}: y plus the inverse of φ_y on S_ψ.
    Subspace,
    /// No formula applies; the value comes from the exhaustive table.
    Oracle,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::FullField => "full-field",
            Branch::TraceSplit => "trace-split",
            Branch::Subspace => "subspace",
            Branch::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preimage {
    pub value: Elem,
    pub branch: Branch,
}

/// Linear data that depends only on y.
struct Plan {
    branch: Branch,
    map: Option<LinPoly>,
    /// g(y) + Σ δ_i h_i(y).
    shift: Elem,
}

/// A checked instance with the forward table, the oracle inverse and f̄⁻¹
/// cached at construction.
#[derive(Clone, Debug)]
pub struct MultitermInstance {
    family: Family,
    psi: LinPoly,
    terms: Vec<Term>,
    g: Poly,
    lin: Linearity,
    forward: Vec<Elem>,
    oracle: Vec<Elem>,
    fbar_inv: BTreeMap<Elem, Elem>,
    psi_image: SubspaceBasis,
    s_psi: SubspaceBasis,
    trace_split: Option<SubspaceBasis>,
}

impl MultitermInstance {
    /// Checks that ψ is a q-polynomial commuting with every L_i, that
    /// ψ(δ_i) and h_i(ψ(F)) lie in F_q, that f permutes the field and that
    /// f̄ permutes ψ(F).
    pub fn new(t: &FieldTower, psi: LinPoly, terms: Vec<Term>, g: Poly) -> Result<Self> {
        Self::with_family(t, Family::Multiterm, psi, terms, g)
    }

    fn with_family(
        t: &FieldTower,
        family: Family,
        psi: LinPoly,
        terms: Vec<Term>,
        g: Poly,
    ) -> Result<Self> {
        if psi.linearity() != Linearity::Q {
            return Err(Error::hypothesis("psi is a q-polynomial", None));
        }
        if terms.is_empty() {
            return Err(Error::hypothesis("at least one term", None));
        }
        g.check(t)?;
        let mut refs: Vec<&LinPoly> = terms.iter().map(|tm| &tm.l).collect();
        refs.push(&psi);
        let leveled = common_level(t, &refs);
        let lin = leveled[0].linearity();
        let psi_l = leveled.last().unwrap().clone();
        for (tm, l) in terms.iter().zip(&leveled) {
            tm.h.check(t)?;
            t.check(tm.delta)?;
            if let Some(b) = (0..lin.len(t))
                .map(|j| lin.basis(t, j))
                .find(|&b| l.eval(t, psi_l.eval(t, b)) != psi_l.eval(t, l.eval(t, b)))
            {
                return Err(Error::hypothesis("L_i∘psi = psi∘L_i", Some(b)));
            }
            if !t.in_fq(psi.eval(t, tm.delta)) {
                return Err(Error::hypothesis("psi(delta_i) lies in F_q", Some(tm.delta)));
            }
        }
        let psi_image = image(t, &psi_l);
        let ys = psi_image.elements(t)?;
        for tm in &terms {
            if let Some(&y) = ys.iter().find(|&&y| !t.in_fq(tm.h.eval(t, y))) {
                return Err(Error::hypothesis("h_i(psi(F)) lies in F_q", Some(y)));
            }
        }
        let terms: Vec<Term> = terms
            .into_iter()
            .zip(&leveled)
            .map(|(tm, l)| Term { l: l.clone(), ..tm })
            .collect();
        let mut inst = MultitermInstance {
            family,
            psi,
            terms,
            g,
            lin,
            forward: Vec::new(),
            oracle: Vec::new(),
            fbar_inv: BTreeMap::new(),
            s_psi: s_psi(t, &psi_l),
            psi_image,
            trace_split: None,
        };
        inst.forward = permutation_table(t, |x| inst.eval(t, x))?;
        inst.oracle = invert_table(&inst.forward)?;
        inst.fbar_inv = invert_on(&ys, &ys, |y| inst.fbar(t, y)).map_err(|e| match e {
            Error::NotBijectiveOnDomain { witness } => {
                Error::hypothesis("fbar permutes psi(F)", witness)
            }
            other => other,
        })?;
        if inst.psi == LinPoly::trace(t) && !t.n().is_multiple_of(t.p()) {
            inst.trace_split = Some(kernel(t, &psi_l));
        }
        Ok(inst)
    }

    /// H(x) + x g(T(x)) with H additive over F_q and g over F_q.
    pub fn additive_trace(t: &FieldTower, h_map: LinPoly, g: Poly) -> Result<Self> {
        require_fq_lin(t, "H", &h_map)?;
        require_fq_poly(t, "g", &g)?;
        let terms = vec![
            Term {
                l: h_map,
                delta: Elem::ZERO,
                h: Poly::constant(Elem::ONE),
            },
            Term {
                l: LinPoly::identity(t, Linearity::Q),
                delta: Elem::ZERO,
                h: g,
            },
        ];
        Self::with_family(t, Family::AdditiveTrace, LinPoly::trace(t), terms, Poly::zero())
    }

    /// L1(x) + L2(x) w(L3(x)).
    pub fn three_linear(t: &FieldTower, l1: LinPoly, l2: LinPoly, l3: LinPoly, w: Poly) -> Result<Self> {
        let terms = vec![
            Term {
                l: l1,
                delta: Elem::ZERO,
                h: Poly::constant(Elem::ONE),
            },
            Term {
                l: l2,
                delta: Elem::ZERO,
                h: w,
            },
        ];
        Self::with_family(t, Family::ThreeLinear, l3, terms, Poly::zero())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn eval(&self, t: &FieldTower, x: Elem) -> Elem {
        let y = self.psi.eval(t, x);
        self.terms.iter().fold(self.g.eval(t, y), |acc, tm| {
            let v = t.add(tm.l.eval(t, x), tm.delta);
            t.add(acc, t.mul(v, tm.h.eval(t, y)))
        })
    }

    /// f̄(y) = ψ(g(y)) + Σ (L_i(y) + ψ(δ_i)) h_i(y).
    pub fn fbar(&self, t: &FieldTower, y: Elem) -> Elem {
        self.terms
            .iter()
            .fold(self.psi.eval(t, self.g.eval(t, y)), |acc, tm| {
                let v = t.add(tm.l.eval(t, y), self.psi.eval(t, tm.delta));
                t.add(acc, t.mul(v, tm.h.eval(t, y)))
            })
    }

    pub fn forward_table(&self) -> &[Elem] {
        &self.forward
    }

    /// φ_y = Σ h_i(y) L_i.
    pub fn phi_y(&self, t: &FieldTower, y: Elem) -> LinPoly {
        self.terms.iter().fold(LinPoly::zero(t, self.lin), |acc, tm| {
            acc.add(t, &tm.l.scale(t, tm.h.eval(t, y))).expect("same level")
        })
    }

    fn psi_at_level(&self, t: &FieldTower) -> LinPoly {
        match self.lin {
            Linearity::Q => self.psi.clone(),
            Linearity::P => self.psi.to_p_poly(t),
        }
    }

    fn plan(&self, t: &FieldTower, y: Elem) -> Result<Plan> {
        let phi = self.phi_y(t, y);
        let shift = self.terms.iter().fold(self.g.eval(t, y), |acc, tm| {
            t.add(acc, t.mul(tm.delta, tm.h.eval(t, y)))
        });
        let kphi = kernel(t, &phi);
        if kphi.intersect(t, &self.psi_image)?.is_zero() {
            if let Ok(inv) = lin_inverse_full(t, &phi) {
                return Ok(Plan {
                    branch: Branch::FullField,
                    map: Some(inv),
                    shift,
                });
            }
        }
        if let Some(kt) = &self.trace_split {
            if let Ok(r) = subspace_inverse(t, &phi, kt, kt) {
                return Ok(Plan {
                    branch: Branch::TraceSplit,
                    map: Some(r),
                    shift,
                });
            }
        }
        let psi_s = self.s_psi.map(t, &self.psi_at_level(t))?;
        if kphi.intersect(t, &psi_s)?.is_zero() {
            if let Ok(r) = subspace_inverse(t, &phi, &self.s_psi, &self.s_psi) {
                return Ok(Plan {
                    branch: Branch::Subspace,
                    map: Some(r),
                    shift,
                });
            }
        }
        Ok(Plan {
            branch: Branch::Oracle,
            map: None,
            shift,
        })
    }

    fn apply(&self, t: &FieldTower, plan: &Plan, y: Elem, x: Elem) -> Preimage {
        let value = match (plan.branch, &plan.map) {
            (Branch::FullField, Some(inv)) => inv.eval(t, t.sub(x, plan.shift)),
            (Branch::TraceSplit, Some(r)) => {
                let ninv = t.inv(t.int(t.n() as i64)).expect("p does not divide n");
                let u = t.add(
                    t.sub(t.sub(x, t.mul(ninv, t.trace(x))), plan.shift),
                    t.mul(ninv, t.trace(plan.shift)),
                );
                t.add(t.mul(ninv, y), r.eval(t, u))
            }
            (Branch::Subspace, Some(r)) => {
                let u = t.add(
                    t.sub(t.sub(x, self.psi.eval(t, x)), plan.shift),
                    self.psi.eval(t, plan.shift),
                );
                t.add(y, r.eval(t, u))
            }
            _ => self.oracle[x.0 as usize],
        };
        Preimage {
            value,
            branch: plan.branch,
        }
    }

    /// Preimage of one point.
    pub fn preimage(&self, t: &FieldTower, x: Elem) -> Result<Preimage> {
        t.check(x)?;
        let y = self.fbar_inv[&self.psi.eval(t, x)];
        let plan = self.plan(t, y)?;
        Ok(self.apply(t, &plan, y, x))
    }

    /// Preimages of every element, sharing the linear solve across points
    /// with the same y.
    pub fn preimage_all(&self, t: &FieldTower) -> Result<Vec<Preimage>> {
        let mut plans: HashMap<Elem, Plan> = HashMap::new();
        t.elements()
            .map(|x| {
                let y = self.fbar_inv[&self.psi.eval(t, x)];
                if let std::collections::hash_map::Entry::Vacant(e) = plans.entry(y) {
                    e.insert(self.plan(t, y)?);
                }
                Ok(self.apply(t, &plans[&y], y, x))
            })
            .collect()
    }

    /// Certificate for the assembled preimage map; oracle points are counted
    /// in the returned map.
    pub fn certify(&self, t: &FieldTower) -> Result<(InverseCertificate, BTreeMap<Branch, usize>)> {
        let pre = self.preimage_all(t)?;
        let mut counts = BTreeMap::new();
        for p in &pre {
            *counts.entry(p.branch).or_insert(0) += 1;
        }
        let table: Arc<Vec<Elem>> = Arc::new(pre.iter().map(|p| p.value).collect());
        let cert = certify(
            t,
            self.family,
            &self.forward,
            Arc::new(move |_: &FieldTower, x: Elem| table[x.0 as usize]),
            vec![],
        )?;
        Ok((cert, counts))
    }
}
