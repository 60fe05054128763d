//! Element classes of fixed norm in real quadratic orders `Z[sqrt D]`.

use std::collections::BTreeMap;

use num_integer::Roots;

use crate::error::{Error, Result};

/// `Z[sqrt D]` together with the unit used to form classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadOrder {
    pub d: i64,
    pub fundamental_unit: (i64, i64),
    pub unit_norm: i64,
}

impl QuadOrder {
    /// `Z[sqrt 6]`, unit `5 + 2 sqrt 6`.
    pub const D6: QuadOrder = QuadOrder { d: 6, fundamental_unit: (5, 2), unit_norm: 1 };
    /// `Z[sqrt 2]`, unit `1 + sqrt 2` of norm `-1`.
    pub const D2: QuadOrder = QuadOrder { d: 2, fundamental_unit: (1, 1), unit_norm: -1 };
    /// `Z[sqrt 3]`, unit `2 + sqrt 3`.
    pub const D3: QuadOrder = QuadOrder { d: 3, fundamental_unit: (2, 1), unit_norm: 1 };

    pub fn new(d: i64) -> Result<Self> {
        match d {
            2 => Ok(Self::D2),
            3 => Ok(Self::D3),
            6 => Ok(Self::D6),
            _ => Err(Error::InvalidArgument(format!("unsupported order Z[sqrt {d}]"))),
        }
    }

    /// The norm-preserving unit acting on classes: the fundamental unit, squared if its norm is `-1`.
    pub fn acting_unit(&self) -> (i64, i64) {
        let (a, b) = self.fundamental_unit;
        if self.unit_norm == 1 {
            (a, b)
        } else {
            (a * a + self.d * b * b, 2 * a * b)
        }
    }

    pub fn norm(&self, u: i64, v: i64) -> i64 {
        u * u - self.d * v * v
    }

    fn mul(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        (x.0 * y.0 + self.d * x.1 * y.1, x.0 * y.1 + x.1 * y.0)
    }

    /// Search window `|v| <= V(m)` that meets every class of norm `m`.
    pub fn window(&self, m: i64) -> i64 {
        let (a, b) = self.acting_unit();
        let eps = a as f64 + b as f64 * (self.d as f64).sqrt();
        ((m.unsigned_abs() as f64).sqrt() * eps).ceil() as i64 + 1
    }
}

/// One representative per class of `u^2 - D v^2 = target` under `<-1, unit>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellClassSet {
    pub target: i64,
    pub reps: Vec<(i64, i64)>,
}

fn canonical_key(x: (i64, i64)) -> (i64, bool, bool) {
    (x.1.abs(), x.1 < 0, x.0 <= 0)
}

/// Canonical class representative: minimal `|v|`, then `v >= 0`, then `u > 0`.
pub fn reduce(order: &QuadOrder, x: (i64, i64)) -> (i64, i64) {
    let (a, b) = order.acting_unit();
    let (e, ei) = ((a, b), (a, -b));
    let mut cur = x;
    loop {
        let up = order.mul(cur, e);
        let down = order.mul(cur, ei);
        let best = if up.1.abs() < down.1.abs() { up } else { down };
        if best.1.abs() < cur.1.abs() {
            cur = best;
        } else {
            break;
        }
    }
    let mut cands = Vec::with_capacity(6);
    for y in [cur, order.mul(cur, e), order.mul(cur, ei)] {
        cands.push(y);
        cands.push((-y.0, -y.1));
    }
    cands.into_iter().min_by_key(|&y| canonical_key(y)).expect("nonempty")
}

/// All solutions of `u^2 - D v^2 = m` with `|v| <= window`.
fn window_solutions(order: &QuadOrder, m: i64) -> Vec<(i64, i64)> {
    let w = order.window(m);
    let mut out = Vec::new();
    for v in -w..=w {
        let u2 = m + order.d * v * v;
        if u2 < 0 {
            continue;
        }
        let u = u2.sqrt();
        if u * u != u2 {
            continue;
        }
        out.push((u, v));
        if u != 0 {
            out.push((-u, v));
        }
    }
    out
}

pub fn pell_classes(order: &QuadOrder, m: i64) -> PellClassSet {
    let mut reps: Vec<(i64, i64)> = window_solutions(order, m).into_iter().map(|x| reduce(order, x)).collect();
    reps.sort_unstable();
    reps.dedup();
    PellClassSet { target: m, reps }
}

/// Sums `weight` over classes, checking that it is constant on every class within the window.
pub fn weighted_class_count(order: &QuadOrder, m: i64, weight: impl Fn(i64, i64) -> i64) -> Result<i64> {
    let mut seen: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    for x in window_solutions(order, m) {
        let w = weight(x.0, x.1);
        let rep = reduce(order, x);
        match seen.get(&rep) {
            Some(&w0) if w0 != w => {
                return Err(Error::ClassInvariantViolation(format!(
                    "norm {m}: ({}, {}) has weight {w}, its class representative ({}, {}) has {w0}",
                    x.0, x.1, rep.0, rep.1
                )))
            }
            Some(_) => {}
            None => {
                seen.insert(rep, w);
            }
        }
    }
    Ok(seen.values().sum())
}

fn sigma_weight(u: i64, v: i64) -> i64 {
    match (u + 3 * v).rem_euclid(12) {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// Signed class count `T(m)` over `u^2 - 6 v^2 = m` weighted by `u + 3v mod 12`.
pub fn t_sigma(m: i64) -> Result<i64> {
    weighted_class_count(&QuadOrder::D6, m, sigma_weight)
}

/// Coefficient of `q^n` in sigma: `T(24n + 1)`.
pub fn sigma_coeff_arith(n: u64) -> Result<i64> {
    t_sigma(24 * n as i64 + 1)
}

/// Coefficient of `q^n` in sigma*: `T(1 - 24n)`.
pub fn sigma_star_coeff_arith(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidArgument("sigma* has no constant term".into()));
    }
    t_sigma(1 - 24 * n as i64)
}

/// Which residues of `|N|` modulo `modulus` are admitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusCondition {
    pub modulus: i64,
    pub residues: Vec<i64>,
}

impl ModulusCondition {
    pub fn new(modulus: i64, residues: &[i64]) -> Self {
        ModulusCondition { modulus, residues: residues.to_vec() }
    }

    pub fn admits(&self, n: i64) -> bool {
        self.residues.contains(&n.abs().rem_euclid(self.modulus))
    }
}

/// Number of element classes of norm `sign * m`, zero when `m` fails `cond`;
/// with `parity_weight` each class counts `(-1)^m`.
pub fn signed_class_count(
    order: &QuadOrder,
    m: i64,
    sign: i64,
    cond: Option<&ModulusCondition>,
    parity_weight: bool,
) -> Result<i64> {
    if m < 1 || sign.abs() != 1 {
        return Err(Error::InvalidArgument(format!("signed class count needs m >= 1 and sign +-1, got {m}, {sign}")));
    }
    if cond.is_some_and(|c| !c.admits(m)) {
        return Ok(0);
    }
    let n = sign * m;
    let count = weighted_class_count(order, n, |_, _| 1)?;
    Ok(if parity_weight && m % 2 != 0 { -count } else { count })
}
