//! Renormalization: sums of tails, ghost terms, shadows and the involution check.

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::catalog::{
    build_series, family, ghost_closed_form, ghost_of, NamedSeriesId, SeriesFamily, TailOptions, VerificationReport,
};
use crate::error::{Error, Result};
use crate::expr::QPoint;
use crate::mp::{digits_to_bits, MpReal};
use crate::series::{Exponent, TruncatedQSeries};

/// `sum_{n >= n_start} (H_n(q^{-1}) - H_inf(q^{-1}))` modulo `q^bound`, and the number of terms used.
pub fn tails_sum(fam: &SeriesFamily, bound: Exponent, opts: &TailOptions) -> Result<(TruncatedQSeries, u64)> {
    if bound <= Exponent::zero() {
        return Ok((TruncatedQSeries::zero(Exponent::zero()), 0));
    }
    fam.tails(bound, opts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenormResult {
    pub id: NamedSeriesId,
    pub tails: TruncatedQSeries,
    pub ghost: TruncatedQSeries,
    pub shadow: TruncatedQSeries,
    pub n_used: u64,
}

impl RenormResult {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id.as_str(),
            "tails": self.tails.to_json(),
            "ghost": self.ghost.to_json(),
            "shadow": self.shadow.to_json(),
            "n_used": self.n_used,
        })
    }
}

/// The catalogued series that the shadow of `id` equals, with its sign.
pub fn shadow_partner(id: NamedSeriesId) -> Option<(NamedSeriesId, i64)> {
    use NamedSeriesId::*;
    match id {
        Sigma => Some((SigmaStar, -1)),
        SigmaStar => Some((Sigma, -1)),
        W => Some((SW, 1)),
        SW => Some((W, 1)),
        _ => None,
    }
}

/// Splits the tails sum of `id` into its catalogued ghost and the shadow `tails - ghost`.
pub fn shadow(id: NamedSeriesId, bound: Exponent) -> Result<RenormResult> {
    shadow_with(id, bound, &TailOptions::default())
}

pub fn shadow_with(id: NamedSeriesId, bound: Exponent, opts: &TailOptions) -> Result<RenormResult> {
    let ghost_id =
        ghost_of(id).ok_or_else(|| Error::InvalidArgument(format!("{id} has no catalogued ghost term")))?;
    let fam = family(id).ok_or_else(|| Error::NoLimitTerm(id.as_str().to_string()))?;
    let (tails, n_used) = tails_sum(&fam, bound, opts)?;
    let bound = tails.bound();
    let ghost = build_series(ghost_id, bound)?;
    let shadow = tails.sub_series(&ghost);
    Ok(RenormResult { id, tails, ghost, shadow, n_used })
}

/// Checks `S[S[H]] = H`, going through the catalogued partner of `S[H]`.
pub fn check_involution(id: NamedSeriesId, bound: Exponent) -> Result<VerificationReport> {
    let name = format!("INVOLUTION_{}", id.as_str());
    let (partner, sign) = shadow_partner(id)
        .ok_or_else(|| Error::InvalidArgument(format!("{id} is not part of a renormalization pair")))?;
    let relation = format!("S[S[{id}]] = {id} with S[{id}] = {}{partner}", if sign < 0 { "-" } else { "" });
    if bound <= Exponent::zero() {
        let z = TruncatedQSeries::zero(Exponent::zero());
        return Ok(VerificationReport::compare(&name, &relation, Exponent::zero(), z.clone(), z));
    }
    let sgn = BigRational::from_integer(sign.into());
    let first = shadow(id, bound)?;
    let expected = build_series(partner, bound)?.scale(&sgn);
    let step = VerificationReport::compare(&format!("{name}[S]"), &relation, bound, first.shadow, expected);
    let second = shadow(partner, bound)?;
    let back = second.shadow.scale(&sgn);
    let full = VerificationReport::compare(&format!("{name}[SS]"), &relation, bound, back, build_series(id, bound)?);
    Ok(VerificationReport::aggregate(&name, &relation, bound, vec![step, full]))
}

/// Whether `id`'s ghost is defined at primitive roots of unity of `order`.
pub fn ghost_defined_at_order(id: NamedSeriesId, order: u32) -> bool {
    use NamedSeriesId::*;
    match id {
        GhostSigma | GhostSW => order % 2 == 1,
        GhostW => order % 4 == 0,
        GhostSigmaStar => ghost_closed_form(id)
            .is_some_and(|g| !g.has_product_pole_at_root(Exponent::new(1, order as i64))),
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayPoint {
    pub r: f64,
    pub magnitude: f64,
    /// `log|G| / log(1 - r)`.
    pub exponent: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayProfile {
    pub id: NamedSeriesId,
    pub order: u32,
    pub points: Vec<DecayPoint>,
}

impl DecayProfile {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].magnitude < w[0].magnitude)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("order,r,magnitude\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{:e}\n", self.order, p.r, p.magnitude));
        }
        out
    }
}

/// `|G(r zeta)|` along `radii` for `zeta = e^{2 pi i / order}`, from the closed form.
pub fn ghost_decay_profile(id: NamedSeriesId, order: u32, radii: &[f64], digits: usize) -> Result<DecayProfile> {
    let g = ghost_closed_form(id).ok_or_else(|| Error::InvalidArgument(format!("{id} is not a ghost term")))?;
    if order == 0 {
        return Err(Error::InvalidArgument("root order must be positive".into()));
    }
    if !ghost_defined_at_order(id, order) {
        return Err(Error::PoleAtPoint(format!("{id} is not defined at roots of unity of order {order}")));
    }
    let p = digits_to_bits(digits);
    let mut points = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!("radius {r} is outside (0, 1)")));
        }
        let q = QPoint::polar(MpReal::from_f64(r, p), Exponent::new(1, order as i64), p);
        let magnitude = g.eval(&q)?.abs().to_f64();
        points.push(DecayPoint { r, magnitude, exponent: magnitude.ln() / (1.0 - r).ln() });
    }
    Ok(DecayProfile { id, order, points })
}
