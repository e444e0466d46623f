//! One PASS/FAIL line per acceptance criterion. Criteria listed in
//! `UNATTAINABLE` are reported but do not fail the run.

use std::process::ExitCode;
use std::time::Instant;

use compinv::families::{
    bilinear_indicators, invert_bilinear_general, invert_binomial_power, invert_binomial_translate,
    invert_binomial_tq, invert_frobenius_difference_power, invert_shifted_frobenius,
    invert_trace_translate, shifted_b_coeffs, wu_b_coeffs,
};
use compinv::linearized::{
    circulant_subspace_inverse, count_idempotents, dickson_matrix, enumerate_idempotents, kernel,
    lin_inverse_full, p_c, p_c_determinant, pc_kernel_inverse, subspace_inverse, KerTCase, Strategy,
};
use compinv::poly::{brute_inverse, compose_mod, functions_equal, interpolate_values, invert_on, is_permutation, tabulate};
use compinv::{Elem, Error, FieldTower, LinPoly, Linearity, Poly};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// The literal F_64 bilinear instance has a = 1 = -1 in characteristic 2, so
/// ax^2 + x·x vanishes on F_4 and the map is not a permutation.
const UNATTAINABLE: &[&str] = &["8a"];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tower(p: u32, m: u32, n: u32) -> FieldTower {
    FieldTower::new(p, m, n).unwrap()
}

fn rand_elem(t: &FieldTower, rng: &mut ChaCha8Rng) -> Elem {
    Elem(rng.gen_range(0..t.order()) as u32)
}

fn rand_fq(t: &FieldTower, rng: &mut ChaCha8Rng) -> Elem {
    let fq: Vec<Elem> = t.fq_elements().collect();
    *fq.choose(rng).unwrap()
}

fn rand_lin(t: &FieldTower, rng: &mut ChaCha8Rng, lin: Linearity) -> LinPoly {
    let coeffs = (0..lin.len(t)).map(|_| rand_elem(t, rng)).collect();
    LinPoly::new(t, lin, coeffs).unwrap()
}

fn rand_fq_lin(t: &FieldTower, rng: &mut ChaCha8Rng) -> LinPoly {
    let coeffs = (0..t.n()).map(|_| rand_fq(t, rng)).collect();
    LinPoly::new(t, Linearity::Q, coeffs).unwrap()
}

fn desk_fields() -> Vec<FieldTower> {
    vec![tower(2, 1, 3), tower(3, 1, 2), tower(2, 1, 4), tower(3, 1, 3)]
}

fn criterion_1() -> Outcome {
    let counts: Vec<u128> = (2..=5).map(|q| count_idempotents(2, q).unwrap()).collect();
    ensure(counts == [8, 14, 22, 32], || format!("counts {counts:?}"))?;
    let t = tower(2, 1, 2);
    let all = enumerate_idempotents(&t).map_err(|e| e.to_string())?;
    ensure(all.len() == 8, || format!("enumerated {}", all.len()))?;
    ensure(all.iter().all(|l| l.is_idempotent(&t)), || "non-idempotent entry".into())?;
    Ok(format!("counts {counts:?}, 8 idempotents on F_4"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut perms = 0;
    for t in desk_fields() {
        for _ in 0..200 {
            let a = rand_lin(&t, &mut rng, Linearity::Q);
            let b = rand_lin(&t, &mut rng, Linearity::Q);
            let c = a.compose(&t, &b).unwrap().to_poly(&t);
            let oracle = compose_mod(&t, &a.to_poly(&t), &b.to_poly(&t)).unwrap();
            ensure(functions_equal(&t, &c, &oracle), || format!("{a} ∘ {b}"))?;
            let nonsingular = !dickson_matrix(&t, &a).determinant(&t).is_zero();
            let bij = is_permutation(&t, &a.to_poly(&t)).unwrap();
            ensure(nonsingular == bij, || format!("determinant verdict for {a}"))?;
            perms += bij as usize;
        }
    }
    Ok(format!("800 compositions and determinants, {perms} permutations"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in desk_fields() {
        let mut done = 0;
        while done < 50 {
            let l = rand_lin(&t, &mut rng, Linearity::Q);
            let Ok(inv) = lin_inverse_full(&t, &l) else { continue };
            ensure(inv.compose(&t, &l).unwrap() == LinPoly::identity(&t, Linearity::Q), || {
                format!("{inv} ∘ {l}")
            })?;
            done += 1;
        }
    }
    let mut binomials = 0;
    for t in [tower(3, 1, 2), tower(5, 1, 2), tower(2, 2, 2), tower(7, 1, 2)] {
        for a in t.fq_elements() {
            for b in t.fq_elements() {
                let d = t.sub(t.mul(a, a), t.mul(b, b));
                if d.is_zero() {
                    continue;
                }
                let l = LinPoly::new(&t, Linearity::Q, vec![b, a]).unwrap();
                let di = t.inv(d).unwrap();
                let closed = LinPoly::new(&t, Linearity::Q, vec![t.neg(t.mul(b, di)), t.mul(a, di)]).unwrap();
                let inv = lin_inverse_full(&t, &l).map_err(|e| e.to_string())?;
                ensure(functions_equal(&t, &inv.to_poly(&t), &closed.to_poly(&t)), || {
                    format!("binomial a={a} b={b}")
                })?;
                binomials += 1;
            }
        }
    }
    Ok(format!("200 random inverses, {binomials} binomial closed forms"))
}

/// A random subspace given as the kernel of a random singular map.
fn rand_kernel(t: &FieldTower, rng: &mut ChaCha8Rng, lin: Linearity) -> compinv::SubspaceBasis {
    loop {
        let k = kernel(t, &rand_lin(t, rng, lin));
        if !k.is_zero() || rng.gen_bool(0.1) {
            return k;
        }
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let fields = [tower(2, 1, 3), tower(3, 1, 2), tower(2, 1, 4)];
    let mut pairs = 0;
    while pairs < 120 {
        let t = &fields[pairs % 3];
        let lin = if rng.gen_bool(0.5) { Linearity::Q } else { Linearity::P };
        let v = rand_kernel(t, &mut rng, lin);
        let phi = rand_lin(t, &mut rng, lin);
        let vbar = v.map(t, &phi).unwrap();
        if vbar.dim() != v.dim() {
            continue;
        }
        let r = subspace_inverse(t, &phi, &v, &vbar).map_err(|e| e.to_string())?;
        for x in v.elements(t).unwrap() {
            ensure(r.eval(t, phi.eval(t, x)) == x, || format!("R(phi({x})) on {t:?}"))?;
        }
        pairs += 1;
    }
    let mut closed = 0;
    for (p, m, n) in [(2u32, 1u32, 3u32), (3, 1, 2), (2, 2, 3)] {
        let t = tower(p, m, n);
        let kt = kernel(&t, &LinPoly::trace(&t)).to_prime_level(&t);
        let ninv = t.inv(t.int(n as i64)).unwrap();
        for c in t.fq_elements().filter(|c| !c.is_zero()) {
            if !matches!(pc_kernel_inverse(&t, c).unwrap(), KerTCase::Case1(_)) {
                continue;
            }
            let mut coeffs = vec![Elem::ZERO; (m * n) as usize];
            for k in 0..n {
                for j in 0..m {
                    let e = (u64::from(p).pow(j + 1) - 1) / (u64::from(p) - 1);
                    let sign = if j % 2 == 0 { Elem::ONE } else { t.neg(Elem::ONE) };
                    let cj = t.pow(t.inv(c).unwrap(), e);
                    let v = t.mul(t.mul(ninv, sign), t.mul(cj, t.int(i64::from(n) - 1 - i64::from(k))));
                    coeffs[(k * m + j) as usize] = v;
                }
            }
            let d = LinPoly::new(&t, Linearity::P, coeffs).unwrap();
            let pc = p_c(&t, c);
            for x in kt.elements(&t).unwrap() {
                ensure(d.eval(&t, pc.eval(&t, x)) == x, || format!("closed form {p}:{m}:{n} c={c}"))?;
            }
            let r = subspace_inverse(&t, &pc, &kt, &kt).map_err(|e| e.to_string())?;
            for x in kt.elements(&t).unwrap() {
                ensure(r.eval(&t, x) == d.eval(&t, x), || format!("solver vs closed form c={c}"))?;
            }
            closed += 1;
        }
    }
    ensure(closed >= 3, || format!("only {closed} closed-form instances"))?;
    Ok(format!("{pairs} random (phi, V) pairs, {closed} closed-form solutions"))
}

/// Fields with p ∤ n, where the transform path is defined.
fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fields = [tower(2, 1, 3), tower(3, 1, 2), tower(2, 1, 5), tower(3, 1, 4), tower(2, 2, 3), tower(5, 1, 2)];
    let (mut ntt, mut total) = (0, 0);
    for t in &fields {
        for _ in 0..60 {
            let v = rand_kernel(t, &mut rng, Linearity::Q);
            let phi = rand_fq_lin(t, &mut rng);
            let vbar = v.map(t, &phi).unwrap();
            if vbar.dim() != v.dim() {
                continue;
            }
            let fast = circulant_subspace_inverse(t, &phi, &v, &vbar).map_err(|e| e.to_string())?;
            let gauss = subspace_inverse(t, &phi, &v, &vbar).unwrap();
            total += 1;
            if fast.strategy == Strategy::Ntt {
                ntt += 1;
                for x in v.elements(t).unwrap() {
                    ensure(fast.inverse.eval(t, x) == gauss.eval(t, x), || format!("{phi} at {x}"))?;
                }
            }
        }
    }
    ensure(ntt > 0, || "transform path never applied".into())?;
    Ok(format!("{ntt} of {total} solves took the transform path, all equal to elimination"))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for (p, m, n) in [(2u32, 1u32, 3u32), (2, 2, 3), (3, 1, 2), (3, 1, 4), (5, 1, 2)] {
        let t = tower(p, m, n);
        let kt = kernel(&t, &LinPoly::trace(&t)).elements(&t).unwrap();
        for c in t.fq_elements().filter(|c| !c.is_zero()) {
            let pc = p_c(&t, c);
            let bij = invert_on(&kt, &kt, |x| pc.eval(&t, x)).is_ok();
            let case = pc_kernel_inverse(&t, c).unwrap();
            ensure(bij == case.inverse().is_some(), || format!("{p}:{m}:{n} c={c} {}", case.tag()))?;
            if let Some(inv) = case.inverse() {
                ensure(kt.iter().all(|&x| inv.eval(&t, pc.eval(&t, x)) == x), || {
                    format!("{p}:{m}:{n} c={c} inverse")
                })?;
            }
            if let KerTCase::Case2(_) = case {
                ensure(is_permutation(&t, &pc.to_poly(&t)).unwrap(), || format!("case2 c={c}"))?;
            }
            let det = dickson_matrix(&t, &pc).determinant(&t);
            ensure(det == p_c_determinant(&t, c), || format!("determinant c={c}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} values of c classified"))
}

fn verified(cert: &compinv::InverseCertificate, what: &str) -> Result<(), String> {
    ensure(cert.verified && cert.cross_checks_agree(), || format!("{what}: {cert}"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut certs = 0;
    for t in [tower(3, 1, 2), tower(5, 1, 2)] {
        let gs = [Poly::x(), Poly::monomial(Elem::ONE, 2), Poly::new(vec![Elem(1), Elem(3), Elem(0), Elem(2)])];
        for a in t.fq_elements() {
            for b in t.fq_elements() {
                if t.mul(a, a) == t.mul(b, b) {
                    continue;
                }
                for c in t.fq_elements().filter(|c| !c.is_zero()) {
                    for g in &gs {
                        let cert = invert_binomial_tq(&t, a, b, c, g).map_err(|e| e.to_string())?;
                        verified(&cert, "binomial-tq")?;
                        certs += 1;
                    }
                }
            }
        }
    }
    let t = tower(3, 1, 2);
    for a in t.fq_elements() {
        for b in t.fq_elements() {
            for gamma in t.elements() {
                match invert_binomial_translate(&t, a, b, gamma) {
                    Ok(cert) => {
                        verified(&cert, "binomial-translate")?;
                        certs += 1;
                    }
                    Err(Error::HypothesisViolated { .. }) => {}
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
    }
    let mut translates = 0;
    let fields = [tower(2, 1, 3), tower(3, 1, 2)];
    while translates < 20 {
        let t = &fields[translates % 2];
        let phi = rand_fq_lin(t, &mut rng);
        let gamma = rand_elem(t, &mut rng);
        match invert_trace_translate(t, &phi, gamma, &Poly::x()) {
            Ok(cert) => {
                verified(&cert, "trace-translate")?;
                ensure(!cert.cross_checks.is_empty(), || "closed form not compared".into())?;
                translates += 1;
            }
            Err(Error::HypothesisViolated { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    certs += translates;
    let t = tower(2, 1, 4);
    for s in [5, 10] {
        for delta in t.elements() {
            let cert = invert_frobenius_difference_power(&t, 2, s, delta).map_err(|e| e.to_string())?;
            verified(&cert, "frobenius-difference-power")?;
            certs += 1;
        }
    }
    let t = tower(3, 1, 2);
    for k in [2, 4] {
        for a in t.fq_elements() {
            for b in t.fq_elements() {
                if t.mul(a, a) == t.mul(b, b) {
                    continue;
                }
                let cert = invert_binomial_power(&t, a, b, k).map_err(|e| e.to_string())?;
                verified(&cert, "binomial-power")?;
                certs += 1;
            }
        }
    }
    Ok(format!("{certs} certificates verified in both directions"))
}

fn bilinear_instance(t: &FieldTower, a: Elem, g: &Poly) -> Result<(), String> {
    let cert = invert_bilinear_general(t, a, g).map_err(|e| e.to_string())?;
    verified(&cert, "bilinear")?;
    let brute = brute_inverse(t, &cert.forward).map_err(|e| e.to_string())?;
    ensure(brute == cert.inverse, || format!("step function vs oracle for a={a} g={g}"))?;
    let ind = bilinear_indicators(t, a, g).map_err(|e| e.to_string())?;
    let one = |v: Elem| (v == Elem::ONE) as u8;
    ensure(ind.iter().all(|i| one(i.zero) + one(i.full) + one(i.kernel) == 1), || "indicator overlap".into())
}

fn criterion_8a() -> Outcome {
    let t = tower(2, 2, 3);
    let g = Poly::monomial(Elem::ONE, t.p() as usize - 1);
    bilinear_instance(&t, Elem::ONE, &g)?;
    Ok("F_64, a = 1, g = x".into())
}

fn criterion_8b() -> Outcome {
    let t = tower(2, 2, 3);
    let g = Poly::x();
    for a in t.fq_elements().filter(|&a| a != Elem::ZERO && a != Elem::ONE) {
        bilinear_instance(&t, a, &g)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fields = [tower(2, 1, 3), tower(3, 1, 3)];
    let (mut hits, mut tries) = (0, 0);
    while hits < 12 && tries < 5000 {
        tries += 1;
        let t = &fields[tries % 2];
        let a = rand_fq(t, &mut rng);
        if a.is_zero() {
            continue;
        }
        let deg = rng.gen_range(0..4);
        let g = Poly::new((0..=deg).map(|_| rand_fq(t, &mut rng)).collect());
        match invert_bilinear_general(t, a, &g) {
            Ok(_) => {
                bilinear_instance(t, a, &g)?;
                hits += 1;
            }
            Err(Error::HypothesisViolated { .. }) | Err(Error::NotPermutation { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    ensure(hits >= 10, || format!("only {hits} random instances passed the hypotheses"))?;
    Ok(format!("F_64 with a in F_4 \\ F_2, {hits} random instances on F_8/F_27"))
}

fn criterion_9() -> Outcome {
    let mut n_alpha = 0;
    for n in [3u32, 4, 5] {
        let t = tower(2, 1, n);
        for alpha in t.elements() {
            let vals = tabulate(&t, |x| {
                let s = t.trace(t.mul(alpha, x));
                t.add(t.sub(t.frobenius(x, 1), x), s)
            });
            let perm = is_permutation(&t, &interpolate_values(&t, &vals).unwrap()).unwrap();
            let r = invert_shifted_frobenius(&t, alpha, Elem::ONE, &Poly::x());
            match r {
                Ok(cert) => {
                    ensure(perm, || format!("n={n} alpha={alpha} accepted a non-permutation"))?;
                    verified(&cert, "shifted-frobenius")?;
                }
                Err(Error::NotPermutation { .. }) => {
                    ensure(!perm, || format!("n={n} alpha={alpha} rejected a permutation"))?
                }
                Err(e) => return Err(e.to_string()),
            }
            n_alpha += 1;
        }
    }
    let mut split = 0;
    for n in [3u32, 5] {
        let t = tower(2, 1, n);
        for a in t.elements().skip(1) {
            let alpha = t.inv(a).unwrap();
            if t.trace(alpha) != Elem::ONE {
                continue;
            }
            ensure(wu_b_coeffs(&t, alpha).unwrap() == shifted_b_coeffs(&t, alpha), || {
                format!("b_k for n={n} a={a}")
            })?;
            let cert = invert_shifted_frobenius(&t, alpha, Elem::ONE, &Poly::x()).unwrap();
            verified(&cert, "shifted-frobenius")?;
            split += 1;
        }
    }
    let t = tower(2, 1, 3);
    let cert = invert_shifted_frobenius(&t, Elem::ONE, Elem::ONE, &Poly::x()).unwrap();
    ensure(cert.forward == Poly::monomial(Elem::ONE, 4), || format!("forward {}", cert.forward))?;
    ensure(cert.inverse == Poly::monomial(Elem::ONE, 2), || format!("inverse {}", cert.inverse))?;
    Ok(format!("{n_alpha} verdicts, {split} coefficient splits, F_8 map x^4 with inverse x^2"))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let fields = [
        tower(2, 1, 3),
        tower(3, 1, 2),
        tower(2, 1, 4),
        tower(5, 1, 2),
        tower(3, 1, 3),
        tower(2, 1, 5),
        tower(2, 2, 3),
        tower(7, 1, 2),
        tower(2, 1, 8),
    ];
    for t in &fields {
        for _ in 0..50 {
            let mut table: Vec<Elem> = t.elements().collect();
            table.shuffle(&mut rng);
            let f = interpolate_values(t, &table).unwrap();
            let back = brute_inverse(t, &brute_inverse(t, &f).unwrap()).unwrap();
            ensure(back == f, || format!("double inverse on {}", t.spec_string()))?;
        }
    }
    Ok(format!("50 random permutations on each of {} fields", fields.len()))
}

fn main() -> ExitCode {
    #[allow(clippy::type_complexity)]
    let criteria: [(&str, &str, fn() -> Outcome); 11] = [
        ("1", "idempotent census", criterion_1),
        ("2", "Dickson composition and determinant", criterion_2),
        ("3", "full linearized inverse", criterion_3),
        ("4", "subspace inverse", criterion_4),
        ("5", "transform path equals elimination", criterion_5),
        ("6", "x^p + cx on ker(T)", criterion_6),
        ("7", "split-map families", criterion_7),
        ("8a", "bilinear step function, F_64 a=1 g=x^(p-1)", criterion_8a),
        ("8b", "bilinear step function, valid and random instances", criterion_8b),
        ("9", "shifted Frobenius class", criterion_9),
        ("10", "oracle self-consistency", criterion_10),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail} [{secs:.2}s]"),
            Err(why) => {
                let note = if UNATTAINABLE.contains(&id) { " (known unattainable)" } else { "" };
                println!("FAIL criterion {id} ({name}){note}: {why} [{secs:.2}s]");
                if note.is_empty() {
                    failed.push(id);
                }
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all attainable criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {failed:?}");
        ExitCode::FAILURE
    }
}
