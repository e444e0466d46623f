//! Dispatch from a family tag and a `key=value` block to its constructor.

use super::*;
use crate::literal::Params;

fn split(t: &FieldTower, p: &Params) -> Result<SplitInstance> {
    SplitInstance::new(
        t,
        p.linpoly(t, "phi")?,
        p.linpoly(t, "psi")?,
        p.linpoly(t, "psibar")?,
        p.poly_or(t, "g", Poly::zero())?,
        p.poly_or(t, "h", Poly::constant(Elem::ONE))?,
    )
}

fn preset(
    t: &FieldTower,
    p: &Params,
    build: fn(&FieldTower, LinPoly, Poly, &Poly) -> Result<SplitInstance>,
    which: AdditivePreset,
) -> Result<InverseCertificate> {
    let inst = build(
        t,
        p.linpoly(t, "phi")?,
        p.poly_or(t, "h", Poly::constant(Elem::ONE))?,
        &p.poly(t, "G")?,
    )?;
    invert_additive_case(t, &inst, which)
}

fn small(v: u64, key: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::parse(key, "value too large"))
}

/// Builds and certifies the inverse of the family member described by `p`.
pub fn run_family(t: &FieldTower, family: Family, p: &Params) -> Result<InverseCertificate> {
    let one = Poly::constant(Elem::ONE);
    match family {
        Family::SplitLinear => invert_split_general(t, &split(t, p)?),
        Family::SplitAdditive => invert_additive_case(t, &split(t, p)?, AdditivePreset::General),
        Family::ConstantH => invert_additive_case(t, &split(t, p)?, AdditivePreset::ConstantH),
        Family::Qt => preset(t, p, SplitInstance::qt, AdditivePreset::Qt),
        Family::Tq => preset(t, p, SplitInstance::tq, AdditivePreset::Tq),
        Family::Nq => preset(t, p, SplitInstance::nq, AdditivePreset::Nq),
        Family::BinomialTq => invert_binomial_tq(
            t,
            p.elem(t, "a")?,
            p.elem(t, "b")?,
            p.elem_or(t, "c", Elem::ONE)?,
            &p.poly(t, "G")?,
        ),
        Family::TraceTranslate => invert_trace_translate(
            t,
            &p.linpoly(t, "phi")?,
            p.elem(t, "gamma")?,
            &p.poly(t, "G")?,
        ),
        Family::BinomialTranslate => {
            invert_binomial_translate(t, p.elem(t, "a")?, p.elem(t, "b")?, p.elem(t, "gamma")?)
        }
        Family::LinearPower => invert_l1l2(
            t,
            &p.linpoly(t, "L1")?,
            &p.linpoly(t, "L2")?,
            &p.poly_or(t, "G", Poly::x())?,
            p.int("s")?,
            small(p.int("k")?, "k")?,
        ),
        Family::FrobeniusDifferencePower => invert_frobenius_difference_power(
            t,
            small(p.int("k")?, "k")?,
            p.int("s")?,
            p.elem_or(t, "delta", Elem::ZERO)?,
        ),
        Family::BinomialPower => {
            invert_binomial_power(t, p.elem(t, "a")?, p.elem(t, "b")?, p.int("k")?)
        }
        Family::Multiterm => {
            let mut terms = Vec::new();
            for i in 1.. {
                let key = format!("L{i}");
                if p.get(&key).is_none() {
                    break;
                }
                terms.push(Term {
                    l: p.linpoly(t, &key)?,
                    delta: p.elem_or(t, &format!("delta{i}"), Elem::ZERO)?,
                    h: p.poly_or(t, &format!("h{i}"), one.clone())?,
                });
            }
            let inst = MultitermInstance::new(
                t,
                p.linpoly(t, "psi")?,
                terms,
                p.poly_or(t, "g", Poly::zero())?,
            )?;
            Ok(inst.certify(t)?.0)
        }
        Family::ThreeLinear => {
            let inst = MultitermInstance::three_linear(
                t,
                p.linpoly(t, "L1")?,
                p.linpoly(t, "L2")?,
                p.linpoly(t, "L3")?,
                p.poly(t, "w")?,
            )?;
            Ok(inst.certify(t)?.0)
        }
        Family::AdditiveTrace => {
            let inst = MultitermInstance::additive_trace(t, p.linpoly(t, "H")?, p.poly(t, "g")?)?;
            Ok(inst.certify(t)?.0)
        }
        Family::Bilinear => invert_bilinear_general(t, p.elem(t, "a")?, &p.poly(t, "g")?),
        Family::ShiftedFrobenius => invert_shifted_frobenius(
            t,
            p.elem(t, "alpha")?,
            p.elem_or(t, "c", Elem::ONE)?,
            &p.poly_or(t, "G", Poly::x())?,
        ),
    }
}
