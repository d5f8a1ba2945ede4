use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Clause, Lit, Var};
use crate::mbd::{ComponentId, Family, Observation, SystemBuilder, SystemDescription};

/// Parameters of the buggy-encoder family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncoderParams {
    /// Number of observations, at least 2.
    pub r: u32,
    /// Number of four-clause groups, at least 1.
    pub k: u32,
    pub padding_hard: u32,
    pub padding_soft: u32,
    pub seed: u64,
}

impl EncoderParams {
    pub fn new(r: u32, k: u32) -> EncoderParams {
        EncoderParams {
            r,
            k,
            padding_hard: 0,
            padding_soft: 0,
            seed: 0,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.r + 3 * self.k + 9
    }

    pub fn num_clauses(&self) -> u32 {
        self.r + 4 * self.k + 5
    }

    pub fn num_components(&self) -> u32 {
        4 * self.k + 2
    }

    /// Component ids of the two final clauses, the unique multi-observation diagnosis.
    pub fn final_components(&self) -> [ComponentId; 2] {
        [ComponentId::new(4 * self.k + 1), ComponentId::new(4 * self.k + 2)]
    }

    /// Minimal diagnoses of each of the first `r - 1` observations: every odd group
    /// chain or `f41` must break, and likewise every even chain or `f42`. For `k >= 2`
    /// this is `4^k + 4^⌊k/2⌋ + 4^⌈k/2⌉ + 1`; with `k = 1` nothing reaches `w42a`.
    /// Exact while the value stays below 2^53 (k <= 25).
    pub fn early_observation_diagnoses(&self) -> f64 {
        let (even, odd) = (self.k / 2, self.k.div_ceil(2));
        let side = |groups: u32| if groups == 0 { 1.0 } else { 4f64.powi(groups as i32) + 1.0 };
        side(odd) * side(even)
    }

    /// Minimal diagnoses summed over all observations taken one at a time.
    pub fn per_observation_total(&self) -> f64 {
        (self.r - 1) as f64 * self.early_observation_diagnoses() + 1.0
    }
}

/// Variable layout: `x_1..x_{r-1}`, `y2a`, then `y_pb, y_pc, y_pd` for each group,
/// then the nine fixed signals.
#[derive(Debug, Clone, Copy)]
struct Layout {
    r: u32,
    k: u32,
}

impl Layout {
    fn x(&self, j: u32) -> Var {
        Var::from_index(j)
    }

    fn y2a(&self) -> Var {
        Var::from_index(self.r)
    }

    /// `step` 0, 1, 2 stands for `b`, `c`, `d`.
    fn chain(&self, p: u32, step: u32) -> Var {
        Var::from_index(self.r + 3 * (p - 1) + step + 1)
    }

    fn fixed(&self, i: u32) -> Var {
        Var::from_index(self.r + 3 * self.k + 1 + i)
    }

    fn t21a(&self) -> Var {
        self.fixed(0)
    }
    fn w41a(&self) -> Var {
        self.fixed(1)
    }
    fn w42a(&self) -> Var {
        self.fixed(2)
    }
    fn s31a(&self) -> Var {
        self.fixed(3)
    }
    fn u41a(&self) -> Var {
        self.fixed(4)
    }
    fn u42a(&self) -> Var {
        self.fixed(5)
    }
    fn t41a(&self) -> Var {
        self.fixed(6)
    }
    fn z41a(&self) -> Var {
        self.fixed(7)
    }
    fn z42a(&self) -> Var {
        self.fixed(8)
    }
}

fn clause(lits: &[Lit]) -> Clause {
    Clause::new(lits.to_vec())
}

/// Builds the buggy-encoder system and its `r` test observations (ids `1..=r`).
pub fn gen_buggy_encoder(params: &EncoderParams) -> (SystemDescription, Vec<Observation>) {
    assert!(params.r >= 2, "the encoder family needs r >= 2");
    assert!(params.k >= 1, "the encoder family needs k >= 1");
    let (r, k) = (params.r, params.k);
    let l = Layout { r, k };
    let mut b = SystemBuilder::new(params.num_vars());

    for j in 1..r {
        b.add_hard(clause(&[l.x(j).neg(), l.y2a().pos()]));
    }
    for p in 1..=k {
        let w = if p % 2 == 1 { l.w41a() } else { l.w42a() };
        let links = [
            (l.y2a(), l.chain(p, 0)),
            (l.chain(p, 0), l.chain(p, 1)),
            (l.chain(p, 1), l.chain(p, 2)),
            (l.chain(p, 2), w),
        ];
        for (i, (from, to)) in links.into_iter().enumerate() {
            let c = b.add_component(format!("g{p}_{}", i + 1));
            b.add_component_clause(c, clause(&[from.neg(), l.t21a().neg(), to.pos()]));
        }
    }
    b.add_hard(clause(&[l.s31a().neg(), l.w41a().pos()]));
    b.add_hard(clause(&[l.s31a().neg(), l.w42a().pos()]));
    b.add_hard(clause(&[l.w41a().neg(), l.u41a().pos()]));
    b.add_hard(clause(&[l.w42a().neg(), l.u42a().pos()]));
    let f41 = b.add_component("f41");
    b.add_component_clause(f41, clause(&[l.u41a().neg(), l.t41a().neg(), l.z41a().pos()]));
    let f42 = b.add_component("f42");
    b.add_component_clause(f42, clause(&[l.u42a().neg(), l.t41a().neg(), l.z42a().pos()]));

    add_padding(&mut b, params);

    let mut sd = b.build();
    sd.family = Some(Family::BuggyEncoder { r, k });

    let observations = (1..=r)
        .map(|j| {
            let mut units: Vec<Lit> = (1..r).map(|i| Lit::new(l.x(i), i == j)).collect();
            units.push(Lit::new(l.s31a(), j == r));
            units.extend([l.t21a().pos(), l.t41a().pos(), l.z41a().neg(), l.z42a().neg()]);
            Observation::new(j, units).expect("encoder observations are consistent")
        })
        .collect();
    (sd, observations)
}

/// Filler clauses over fresh variables only. Every clause has a positive literal,
/// so setting all filler variables true satisfies them whatever else happens.
fn add_padding(b: &mut SystemBuilder, params: &EncoderParams) {
    let total = params.padding_hard + params.padding_soft;
    if total == 0 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let base = params.num_vars();
    let pool = total.max(3);
    b.ensure_system_vars(base + pool);
    let mut filler = || {
        let width = rng.gen_range(2..=3);
        let mut vars: Vec<u32> = Vec::with_capacity(width);
        while vars.len() < width {
            let v = base + rng.gen_range(1..=pool);
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let lits: Vec<Lit> = vars
            .iter()
            .enumerate()
            .map(|(i, &v)| Lit::new(Var::from_index(v), i == 0 || rng.gen_bool(0.5)))
            .collect();
        Clause::new(lits)
    };
    let hard: Vec<Clause> = (0..params.padding_hard).map(|_| filler()).collect();
    let soft: Vec<Clause> = (0..params.padding_soft).map(|_| filler()).collect();
    for c in hard {
        b.add_hard(c);
    }
    for (i, c) in soft.into_iter().enumerate() {
        let comp = b.add_component(format!("pad{}", i + 1));
        b.add_component_clause(comp, c);
    }
}
