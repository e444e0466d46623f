//! Seeded subspace-inversion instances and a timing sweep comparing
//! Gaussian elimination with the circulant transform path.

use std::fmt;
use std::time::Instant;

use compinv::linearized::{subspace_inverse, CirculantPlan, Strategy};
use compinv::{Elem, FieldTower, LinPoly, Linearity, Result, SubspaceBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// (p, m, n) with p ∤ n and an n-th root of unity in a small extension.
pub const DEFAULT_SHAPES: [(u32, u32, u32); 8] = [
    (2, 1, 3),
    (2, 1, 5),
    (3, 1, 4),
    (2, 1, 7),
    (2, 1, 9),
    (5, 1, 4),
    (3, 1, 8),
    (2, 1, 15),
];

/// φ with F_q coefficients and a subspace V on which it is injective.
#[derive(Clone, Debug)]
pub struct Instance {
    pub phi: LinPoly,
    pub v: SubspaceBasis,
    pub vbar: SubspaceBasis,
}

impl Instance {
    pub fn random(t: &FieldTower, rng: &mut ChaCha8Rng) -> Instance {
        let fq: Vec<Elem> = t.fq_elements().collect();
        loop {
            let coeffs = (0..t.n()).map(|_| fq[rng.gen_range(0..fq.len())]).collect();
            let phi = LinPoly::new(t, Linearity::Q, coeffs).unwrap();
            let dim = rng.gen_range(1..=t.n() as usize);
            let gens: Vec<Elem> = (0..dim).map(|_| Elem(rng.gen_range(0..t.order()) as u32)).collect();
            let v = SubspaceBasis::span(t, Linearity::Q, &gens);
            let vbar = v.map(t, &phi).unwrap();
            if vbar.dim() == v.dim() {
                return Instance { phi, v, vbar };
            }
        }
    }

    /// R(φ(b)) = b on a basis of V.
    pub fn check(&self, t: &FieldTower, r: &LinPoly) -> bool {
        self.v.basis().into_iter().all(|b| r.eval(t, self.phi.eval(t, b)) == b)
    }
}

/// One CSV row: median solve time over the repetitions of one shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub p: u32,
    pub m: u32,
    pub n: u32,
    /// The strategy that actually ran; a transform solve that fell back reports gauss.
    pub strategy: Strategy,
    pub nanos: u128,
    pub verified: bool,
}

impl Row {
    pub const HEADER: &'static str = "p,m,n,strategy,nanos,verified";
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{},{}", self.p, self.m, self.n, self.strategy, self.nanos, self.verified)
    }
}

fn median(mut v: Vec<u128>) -> u128 {
    v.sort_unstable();
    v[v.len() / 2]
}

/// Times both strategies on `reps` seeded instances per shape. Shapes with
/// no usable root of unity only produce a gauss row.
pub fn sweep(shapes: &[(u32, u32, u32)], reps: usize, seed: u64) -> Result<Vec<Row>> {
    let reps = reps.max(1);
    let mut rows = Vec::new();
    for &(p, m, n) in shapes {
        let t = FieldTower::new(p, m, n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(p * 1000 + m * 100 + n));
        let instances: Vec<Instance> = (0..reps).map(|_| Instance::random(&t, &mut rng)).collect();
        let mut times = Vec::new();
        let mut ok = true;
        for inst in &instances {
            let start = Instant::now();
            let r = subspace_inverse(&t, &inst.phi, &inst.v, &inst.vbar)?;
            times.push(start.elapsed().as_nanos());
            ok &= inst.check(&t, &r);
        }
        rows.push(Row { p, m, n, strategy: Strategy::Gauss, nanos: median(times), verified: ok });
        let Ok(plan) = CirculantPlan::new(&t, Linearity::Q) else {
            continue;
        };
        let mut times = Vec::new();
        let mut ok = true;
        let mut strategy = Strategy::Ntt;
        for inst in &instances {
            let start = Instant::now();
            let sol = plan.solve(&t, &inst.phi, &inst.v, &inst.vbar)?;
            times.push(start.elapsed().as_nanos());
            ok &= inst.check(&t, &sol.inverse);
            if sol.strategy == Strategy::Gauss {
                strategy = Strategy::Gauss;
            }
        }
        rows.push(Row { p, m, n, strategy, nanos: median(times), verified: ok });
    }
    Ok(rows)
}
