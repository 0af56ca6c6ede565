use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charset::CharacteristicSet;
use crate::polycore::{ComplexPoint, FloatPoly, PlanarPolyMap};

/// Axis-aligned box in R⁴ = (Re z, Im z, Re w, Im w).
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct Box4 {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl Box4 {
    pub fn volume(&self) -> f64 {
        (0..4).map(|k| self.hi[k] - self.lo[k]).product()
    }

    pub fn is_valid(&self) -> bool {
        (0..4).all(|k| self.lo[k].is_finite() && self.hi[k].is_finite() && self.hi[k] > self.lo[k])
    }

    pub fn contains(&self, p: [f64; 4]) -> bool {
        (0..4).all(|k| p[k] >= self.lo[k] && p[k] <= self.hi[k])
    }

    pub fn hull(&self, other: &Box4) -> Box4 {
        let mut out = *self;
        for k in 0..4 {
            out.lo[k] = out.lo[k].min(other.lo[k]);
            out.hi[k] = out.hi[k].max(other.hi[k]);
        }
        out
    }

    /// The `n⁴` congruent sub-boxes.
    pub fn split(&self, n: usize) -> Vec<Box4> {
        let mut out = Vec::with_capacity(n.pow(4));
        for idx in 0..n.pow(4) {
            let mut b = *self;
            let mut rest = idx;
            for k in 0..4 {
                let h = rest % n;
                rest /= n;
                let w = (self.hi[k] - self.lo[k]) / n as f64;
                b.lo[k] = self.lo[k] + h as f64 * w;
                b.hi[k] = if h + 1 == n { self.hi[k] } else { self.lo[k] + (h + 1) as f64 * w };
            }
            out.push(b);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum DomainShape {
    Ball { center: ComplexPoint, radius: f64 },
    CharSet(Arc<CharacteristicSet>),
}

/// A compact domain `D`, optionally dilated: `D_t = t·D`.
#[derive(Clone, Debug)]
pub struct SamplingDomain {
    pub shape: DomainShape,
    pub scale: f64,
}

impl SamplingDomain {
    pub fn ball(center: ComplexPoint, radius: f64) -> Self {
        assert!(radius > 0.0, "radius must be positive");
        SamplingDomain { shape: DomainShape::Ball { center, radius }, scale: 1.0 }
    }

    pub fn unit_ball() -> Self {
        SamplingDomain::ball(ComplexPoint::real(0.0, 0.0), 1.0)
    }

    pub fn charset(set: CharacteristicSet) -> Self {
        SamplingDomain { shape: DomainShape::CharSet(Arc::new(set)), scale: 1.0 }
    }

    pub fn dilated(&self, t: f64) -> Self {
        assert!(t > 0.0, "scale must be positive");
        SamplingDomain { shape: self.shape.clone(), scale: self.scale * t }
    }

    /// Center and radius of the ball that contains the (dilated) domain.
    fn enclosing_ball(&self) -> (ComplexPoint, f64) {
        match &self.shape {
            DomainShape::Ball { center, radius } => {
                (ComplexPoint::new(center.z * self.scale, center.w * self.scale), radius * self.scale)
            }
            DomainShape::CharSet(c) => (ComplexPoint::real(0.0, 0.0), c.ball_radius * self.scale),
        }
    }

    pub fn contains(&self, p: ComplexPoint) -> bool {
        match &self.shape {
            DomainShape::Ball { center, radius } => {
                let c = ComplexPoint::new(center.z * self.scale, center.w * self.scale);
                p.dist(&c) < radius * self.scale
            }
            DomainShape::CharSet(c) => {
                let inv = 1.0 / self.scale;
                c.contains_point(ComplexPoint::new(p.z * inv, p.w * inv))
            }
        }
    }

    pub fn bounding_box(&self) -> Box4 {
        let (c, r) = self.enclosing_ball();
        let m = c.to_r4();
        Box4 { lo: m.map(|x| x - r), hi: m.map(|x| x + r) }
    }

    /// Sub-boxes of the bounding box that meet the enclosing ball.
    pub fn cover(&self) -> Vec<Box4> {
        self.bounding_box()
            .split(IMAGE_SUBDIVISIONS)
            .into_iter()
            .filter(|b| self.box_may_intersect(b))
            .collect()
    }

    /// Whether a box meets the enclosing ball.
    pub(crate) fn box_may_intersect(&self, b: &Box4) -> bool {
        let (c, r) = self.enclosing_ball();
        let m = c.to_r4();
        let d2: f64 = (0..4)
            .map(|k| {
                let x = m[k].clamp(b.lo[k], b.hi[k]) - m[k];
                x * x
            })
            .sum();
        d2 <= r * r
    }

    /// Closed-form 4-volume when one exists: `π² R⁴ / 2`, minus the removed
    /// volume for characteristic sets.
    pub fn exact_volume(&self) -> f64 {
        let t4 = self.scale.powi(4);
        match &self.shape {
            DomainShape::Ball { radius, .. } => PI * PI * radius.powi(4) / 2.0 * t4,
            DomainShape::CharSet(c) => (PI * PI * c.ball_radius.powi(4) / 2.0 - c.removed_volume()) * t4,
        }
    }

    /// Volume of the enclosing ball (the diameter of the metric is at most twice this).
    pub fn ball_volume(&self) -> f64 {
        let (_, r) = self.enclosing_ball();
        PI * PI * r.powi(4) / 2.0
    }

    pub fn describe(&self) -> String {
        match &self.shape {
            DomainShape::Ball { center, radius } => {
                format!("ball(center=({}, {}), radius={radius}, scale={})", center.z, center.w, self.scale)
            }
            DomainShape::CharSet(c) => format!(
                "charset(R={}, slices={}, bundles={}, fatten={}, seed={}, scale={})",
                c.ball_radius,
                c.slices.len(),
                c.bundles_per_slice,
                c.fattening_radius,
                c.seed,
                self.scale
            ),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }
    fn add(self, o: Interval) -> Interval {
        Interval { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }
    fn sub(self, o: Interval) -> Interval {
        Interval { lo: self.lo - o.hi, hi: self.hi - o.lo }
    }
    fn mul(self, o: Interval) -> Interval {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Interval {
            lo: p.iter().copied().fold(f64::INFINITY, f64::min),
            hi: p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Rectangular complex interval.
#[derive(Clone, Copy, Debug)]
struct CInterval {
    re: Interval,
    im: Interval,
}

impl CInterval {
    fn point(c: Complex64) -> Self {
        CInterval { re: Interval::point(c.re), im: Interval::point(c.im) }
    }
    fn add(self, o: CInterval) -> CInterval {
        CInterval { re: self.re.add(o.re), im: self.im.add(o.im) }
    }
    fn mul(self, o: CInterval) -> CInterval {
        CInterval {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }
}

fn interval_eval(p: &FloatPoly, z: CInterval, w: CInterval) -> CInterval {
    let deg = p.max_degree() as usize;
    let mut zp = vec![CInterval::point(Complex64::new(1.0, 0.0))];
    let mut wp = zp.clone();
    for k in 1..=deg {
        zp.push(zp[k - 1].mul(z));
        wp.push(wp[k - 1].mul(w));
    }
    let mut acc = CInterval::point(Complex64::new(0.0, 0.0));
    for (m, c) in p.terms() {
        acc = acc.add(CInterval::point(c).mul(zp[m.i as usize]).mul(wp[m.j as usize]));
    }
    acc
}

/// Enclosure of `f(b)` by interval arithmetic, padded against rounding.
pub(crate) fn image_box(f: &[FloatPoly; 2], b: &Box4) -> Box4 {
    let z = CInterval { re: Interval { lo: b.lo[0], hi: b.hi[0] }, im: Interval { lo: b.lo[1], hi: b.hi[1] } };
    let w = CInterval { re: Interval { lo: b.lo[2], hi: b.hi[2] }, im: Interval { lo: b.lo[3], hi: b.hi[3] } };
    let p = interval_eval(&f[0], z, w);
    let q = interval_eval(&f[1], z, w);
    let ivs = [p.re, p.im, q.re, q.im];
    let pad = |iv: Interval| {
        let e = 1e-9 * (iv.lo.abs() + iv.hi.abs()) + 1e-9;
        (iv.lo - e, iv.hi + e)
    };
    let mut out = Box4 { lo: [0.0; 4], hi: [0.0; 4] };
    for k in 0..4 {
        (out.lo[k], out.hi[k]) = pad(ivs[k]);
    }
    out
}

pub const IMAGE_SUBDIVISIONS: usize = 8;

/// Interval images of the sub-boxes of D's box that meet D; their union contains `f(D)`.
pub fn image_cover(f: &PlanarPolyMap, d: &SamplingDomain) -> Vec<Box4> {
    let fp = [FloatPoly::from(f.first()), FloatPoly::from(f.second())];
    d.cover().iter().map(|b| image_box(&fp, b)).collect()
}

/// Hull of [`image_cover`].
pub fn image_bounding_box(f: &PlanarPolyMap, d: &SamplingDomain) -> Box4 {
    let cover = image_cover(f, d);
    cover.iter().skip(1).fold(cover[0], |a, b| a.hull(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{BivariatePolynomial, CompiledMap};

    #[test]
    fn ball_geometry() {
        let d = SamplingDomain::unit_ball().dilated(2.0);
        assert!(d.contains(ComplexPoint::real(1.9, 0.0)));
        assert!(!d.contains(ComplexPoint::real(1.5, 1.5)));
        assert_eq!(d.bounding_box().volume(), 256.0);
        assert!((d.exact_volume() - PI * PI * 8.0).abs() < 1e-9);
    }

    #[test]
    fn image_box_encloses_samples() {
        let f = PlanarPolyMap::new(
            BivariatePolynomial::from_int_terms(&[(0, 1, 1), (2, 0, 1)]),
            BivariatePolynomial::from_int_terms(&[(1, 0, -1)]),
        );
        let d = SamplingDomain::unit_ball();
        let b = image_bounding_box(&f, &d);
        let c = CompiledMap::new(&f);
        for k in 0..2000 {
            let t = k as f64 * 0.7;
            let p = ComplexPoint::from_r4([t.sin() * 0.5, t.cos() * 0.5, (1.3 * t).sin() * 0.5, (0.7 * t).cos() * 0.5]);
            assert!(b.contains(c.eval(p).to_r4()));
        }
    }
}
