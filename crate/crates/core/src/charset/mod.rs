//! Characteristic sets `D = B(0, R) − E`, where `E` is a finite truncation of
//! a union of stared segments `{Z_k} × l₀` built from thick stars.

mod geometry;

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use geometry::Triangle;

use crate::polycore::ComplexPoint;
use crate::rng::{purpose, CounterRng};

pub const STARS_PER_BUNDLE: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharsetError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("schema error: {0}")]
    Schema(String),
}

/// Exact rationals travel as `["num", "den"]`.
mod exact {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        (r.numer().to_string(), r.denom().to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let (n, m): (String, String) = Deserialize::deserialize(d)?;
        let n: BigInt = n.parse().map_err(serde::de::Error::custom)?;
        let m: BigInt = m.parse().map_err(serde::de::Error::custom)?;
        if m.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(n, m))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(|r| (r.numer().to_string(), r.denom().to_string()))
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            let raw: Vec<(String, String)> = Deserialize::deserialize(d)?;
            raw.into_iter()
                .map(|(n, m)| {
                    let n: BigInt = n.parse().map_err(serde::de::Error::custom)?;
                    let m: BigInt = m.parse().map_err(serde::de::Error::custom)?;
                    if m.is_zero() {
                        return Err(serde::de::Error::custom("zero denominator"));
                    }
                    Ok(BigRational::new(n, m))
                })
                .collect()
        }
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `2m` triangles with common apex at the star center, in the W-plane of the
/// slice `{Z_k} × C`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ThickStar {
    /// Real position of the center on `l = [0, 1]`.
    #[serde(with = "exact")]
    pub center_w: BigRational,
    pub center: ComplexPoint,
    pub ray_count: u32,
    #[serde(with = "exact")]
    pub ray_length: BigRational,
    /// Seeded angular offset of the sectors.
    pub rotation: f64,
    pub triangles: Vec<Triangle>,
    pub fattening_radius: f64,
}

impl ThickStar {
    /// `m · L² · sin(π / 2m)`: sum of the `2m` triangle areas.
    pub fn area(&self) -> f64 {
        let l = to_f64(&self.ray_length);
        let m = self.ray_count as f64;
        m * l * l * (PI / (2.0 * m)).sin()
    }

    fn w_contains(&self, w: [f64; 2]) -> bool {
        let c = [self.center.w.re, self.center.w.im];
        let l = to_f64(&self.ray_length);
        let (dx, dy) = (w[0] - c[0], w[1] - c[1]);
        if dx * dx + dy * dy > l * l * (1.0 + 1e-12) {
            return false;
        }
        self.triangles.iter().any(|t| t.contains(w))
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct StaredSegment {
    pub slice_index: usize,
    #[serde(with = "exact")]
    pub z: BigRational,
    /// `l = [segment[0], segment[1]]` on the real W-axis.
    #[serde(with = "exact::vec")]
    pub segment: Vec<BigRational>,
    pub stars: Vec<ThickStar>,
    /// Largest ray length in each bundle of five stars.
    #[serde(with = "exact::vec")]
    pub bundle_max_ray: Vec<BigRational>,
}

impl StaredSegment {
    pub fn valences(&self) -> Vec<u32> {
        self.stars.iter().map(|s| s.ray_count).collect()
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CharacteristicSet {
    pub ball_radius: f64,
    pub slices: Vec<StaredSegment>,
    pub bundles_per_slice: usize,
    pub fattening_radius: f64,
    pub seed: u64,
    /// The construction is a finite truncation of an infinite union.
    pub truncated: bool,
}

/// Dyadic rationals of (0, 1) in order 1/2, 1/4, 3/4, 1/8, 3/8, …
fn dyadic_centers(count: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(count);
    let mut level = 1u32;
    while out.len() < count {
        let den = BigInt::one() << level;
        let mut num = BigInt::one();
        while num < den && out.len() < count {
            out.push(BigRational::new(num.clone(), den.clone()));
            num += 2;
        }
        level += 1;
    }
    out
}

/// Star valences of slice `k`: the residue class of `k` mod `K`, from 2 up.
fn valences(k: usize, slices: usize, count: usize) -> Vec<u32> {
    let first = (2..).find(|m| m % slices == k % slices).expect("residue exists");
    (0..count).map(|j| (first + j * slices) as u32).collect()
}

fn bundle_length(b: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(20) * BigInt::from(10).pow(b as u32))
}

/// Deterministic construction; every invariant is verified before returning.
pub fn build_characteristic_set(
    radius: f64,
    slices: usize,
    bundles_per_slice: usize,
    fattening_radius: f64,
    seed: u64,
) -> Result<CharacteristicSet, CharsetError> {
    if !(radius > 1.0) {
        return Err(CharsetError::InvalidParameters(format!("ball radius {radius} must exceed 1")));
    }
    if slices == 0 || bundles_per_slice == 0 {
        return Err(CharsetError::InvalidParameters("slices and bundles must be positive".into()));
    }
    if !(fattening_radius >= 0.0) {
        return Err(CharsetError::InvalidParameters("fattening radius must be non-negative".into()));
    }
    if slices > 1 {
        // Z_{K-1} − Z_K = 1 / (K (K − 1))
        let gap = 1.0 / (slices as f64 * (slices as f64 - 1.0));
        if fattening_radius >= gap {
            return Err(CharsetError::InvalidParameters(format!(
                "fattening radius {fattening_radius} is not below the slice gap {gap}"
            )));
        }
    }
    let rng = CounterRng::new(seed, purpose::CHARSET);
    let n_stars = bundles_per_slice * STARS_PER_BUNDLE;
    let centers = dyadic_centers(n_stars);
    let mut out = Vec::with_capacity(slices);
    for k in 0..slices {
        let z = BigRational::new(BigInt::one(), BigInt::from(k + 1));
        let zf = to_f64(&z);
        let mut stars = Vec::with_capacity(n_stars);
        for (s, (c, m)) in centers.iter().zip(valences(k, slices, n_stars)).enumerate() {
            let length = bundle_length(s / STARS_PER_BUNDLE);
            let mut draw = rng.stream((k * n_stars + s) as u64);
            let max_jitter = PI / (16.0 * m as f64);
            let rotation = (2.0 * draw.random::<f64>() - 1.0) * max_jitter;
            let cf = to_f64(c);
            let triangles = geometry::star_triangles([cf, 0.0], m, to_f64(&length), rotation);
            stars.push(ThickStar {
                center_w: c.clone(),
                center: ComplexPoint::real(zf, cf),
                ray_count: m,
                ray_length: length,
                rotation,
                triangles,
                fattening_radius,
            });
        }
        out.push(StaredSegment {
            slice_index: k,
            z,
            segment: vec![BigRational::zero(), BigRational::one()],
            stars,
            bundle_max_ray: (0..bundles_per_slice).map(bundle_length).collect(),
        });
    }
    let set = CharacteristicSet {
        ball_radius: radius,
        slices: out,
        bundles_per_slice,
        fattening_radius,
        seed,
        truncated: true,
    };
    verify_invariants(&set)?;
    Ok(set)
}

/// Re-checks every structural invariant of a set (also used after JSON input).
pub fn verify_invariants(set: &CharacteristicSet) -> Result<(), CharsetError> {
    let fail = |msg: String| Err(CharsetError::InvariantViolation(msg));
    let mut seen = std::collections::BTreeSet::new();
    for sl in &set.slices {
        for (b, pair) in sl.bundle_max_ray.windows(2).enumerate() {
            if &pair[1] * BigRational::from_integer(10.into()) > pair[0] {
                return fail(format!("slice {}: bundle {} does not decay by 1/10", sl.slice_index, b + 1));
            }
        }
        for (s, star) in sl.stars.iter().enumerate() {
            if star.ray_count < 2 || !seen.insert(star.ray_count) {
                return fail(format!("valence {} repeated or below 2", star.ray_count));
            }
            let budget = sl.bundle_max_ray.get(s / STARS_PER_BUNDLE);
            if budget.is_none_or(|bmax| star.ray_length > *bmax) {
                return fail(format!("star {s} of slice {} exceeds its bundle length", sl.slice_index));
            }
            if star.triangles.len() != 2 * star.ray_count as usize {
                return fail(format!("star {s} has {} triangles", star.triangles.len()));
            }
            if !geometry::triangles_meet_only_at_apex(&star.triangles) {
                return fail(format!("triangles of star {s} overlap"));
            }
            if star.triangles.iter().any(|t| t.crosses_real_axis_away_from_apex()) {
                return fail(format!("star {s} meets the segment away from its center"));
            }
        }
        for (i, a) in sl.stars.iter().enumerate() {
            for b in &sl.stars[i + 1..] {
                let (la, lb) = (to_f64(&a.ray_length), to_f64(&b.ray_length));
                let d = (a.center.w - b.center.w).norm();
                if d > la + lb {
                    continue;
                }
                let clash = a.triangles.iter().any(|t| b.triangles.iter().any(|u| t.intersects(u)));
                if clash {
                    return fail(format!(
                        "stars at {} and {} of slice {} intersect",
                        a.center_w, b.center_w, sl.slice_index
                    ));
                }
            }
        }
        let zf = to_f64(&sl.z) + set.fattening_radius;
        let far_w = sl
            .stars
            .iter()
            .flat_map(|s| s.triangles.iter().flat_map(|t| t.vertices))
            .map(|v| v[0].hypot(v[1]))
            .fold(to_f64(&sl.segment[1]).abs(), f64::max);
        if zf.hypot(far_w) >= set.ball_radius {
            return fail(format!("slice {} leaves the ball of radius {}", sl.slice_index, set.ball_radius));
        }
    }
    Ok(())
}

impl CharacteristicSet {
    /// `p ∈ D`: inside the open ball and outside every fattened stared segment.
    ///
    /// The fattened body of a slice is `{|z − Z_k| ≤ r} × (l ∪ stars)`.
    pub fn contains_point(&self, p: ComplexPoint) -> bool {
        if !(p.norm() < self.ball_radius) {
            return false;
        }
        let r = self.fattening_radius;
        let w = [p.w.re, p.w.im];
        for sl in &self.slices {
            let dz = (p.z - num_complex::Complex64::new(to_f64(&sl.z), 0.0)).norm();
            if dz > r {
                continue;
            }
            let (lo, hi) = (to_f64(&sl.segment[0]), to_f64(&sl.segment[1]));
            if w[1] == 0.0 && w[0] >= lo && w[0] <= hi {
                return false;
            }
            if sl.stars.iter().any(|s| s.w_contains(w)) {
                return false;
            }
        }
        true
    }

    /// `Σ area · π r²` over all stars (segments have zero area).
    pub fn removed_volume(&self) -> f64 {
        let r = self.fattening_radius;
        if r == 0.0 {
            return 0.0;
        }
        let area: f64 = self.slices.iter().flat_map(|s| &s.stars).map(ThickStar::area).sum();
        area * PI * r * r
    }

    pub fn star_count(&self) -> usize {
        self.slices.iter().map(|s| s.stars.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, CharsetError> {
        let set: CharacteristicSet = serde_json::from_str(s).map_err(|e| CharsetError::Schema(e.to_string()))?;
        verify_invariants(&set)?;
        Ok(set)
    }
}

pub fn contains_point(d: &CharacteristicSet, p: ComplexPoint) -> bool {
    d.contains_point(p)
}

pub fn removed_volume(d: &CharacteristicSet) -> f64 {
    d.removed_volume()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn construction_examples() {
        let d = build_characteristic_set(2.0, 1, 2, 0.0, 1).unwrap();
        assert_eq!(d.star_count(), 10);

        let d = build_characteristic_set(2.0, 2, 1, 0.0, 1).unwrap();
        let (a, b) = (d.slices[0].valences(), d.slices[1].valences());
        assert!(a.iter().all(|m| !b.contains(m)));

        let d = build_characteristic_set(2.0, 1, 3, 0.0, 1).unwrap();
        assert_eq!(d.slices[0].bundle_max_ray[2], BigRational::new(1.into(), 2000.into()));
    }

    #[test]
    fn membership_examples() {
        let d = build_characteristic_set(2.0, 1, 2, 0.0, 1).unwrap();
        assert!(!d.contains_point(ComplexPoint::real(10.0, 0.0)));
        assert!(!d.contains_point(ComplexPoint::real(1.0, 0.5)));
        let f = build_characteristic_set(2.0, 1, 2, 0.01, 1).unwrap();
        assert!(f.contains_point(ComplexPoint::new(Complex64::new(-0.5, 0.0), Complex64::new(0.0, 0.5))));
        // inside a fattened triangle of the first star (center 1/2, 2 rays)
        let star = &f.slices[0].stars[0];
        let t = star.triangles[0].centroid();
        let p = ComplexPoint::new(Complex64::new(1.005, 0.0), Complex64::new(t[0], t[1]));
        assert!(!f.contains_point(p));
        assert!(d.contains_point(p));
    }

    #[test]
    fn removed_volume_scaling() {
        assert_eq!(build_characteristic_set(2.0, 1, 1, 0.0, 1).unwrap().removed_volume(), 0.0);
        let a = build_characteristic_set(2.0, 2, 1, 0.1, 1).unwrap().removed_volume();
        let b = build_characteristic_set(2.0, 2, 1, 0.2, 1).unwrap().removed_volume();
        assert!((b / a - 4.0).abs() < 1e-12);
        let one = build_characteristic_set(2.0, 1, 1, 0.1, 1).unwrap();
        let s = &one.slices[0].stars[0];
        let tri: f64 = s.triangles.iter().map(Triangle::area).sum();
        assert!((tri - s.area()).abs() < 1e-15);
    }

    #[test]
    fn parameters_are_checked() {
        assert!(build_characteristic_set(1.0, 1, 1, 0.0, 0).is_err());
        assert!(build_characteristic_set(2.0, 3, 1, 0.2, 0).is_err());
        assert!(matches!(build_characteristic_set(1.2, 1, 1, 0.0, 0), Err(CharsetError::InvariantViolation(_))));
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let d = build_characteristic_set(2.0, 3, 2, 0.05, 9).unwrap();
        let back = CharacteristicSet::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), d.to_json());
    }
}
