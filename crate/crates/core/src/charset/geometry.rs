use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Closed triangle in the W-plane; `vertices[0]` is the apex.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct Triangle {
    pub vertices: [[f64; 2]; 3],
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

impl Triangle {
    pub fn area(&self) -> f64 {
        let [a, b, c] = self.vertices;
        0.5 * cross(a, b, c).abs()
    }

    pub fn centroid(&self) -> [f64; 2] {
        let [a, b, c] = self.vertices;
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let [a, b, c] = self.vertices;
        let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
        let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
        let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
        !(neg && pos)
    }

    /// Separating-axis test on closed triangles.
    pub fn intersects(&self, other: &Triangle) -> bool {
        for tri in [self, other] {
            for e in 0..3 {
                let (p, q) = (tri.vertices[e], tri.vertices[(e + 1) % 3]);
                let axis = [q[1] - p[1], p[0] - q[0]];
                let proj = |t: &Triangle| {
                    t.vertices.iter().map(|v| v[0] * axis[0] + v[1] * axis[1]).fold(
                        (f64::INFINITY, f64::NEG_INFINITY),
                        |(lo, hi), x| (lo.min(x), hi.max(x)),
                    )
                };
                let (a, b) = (proj(self), proj(other));
                if a.1 < b.0 || b.1 < a.0 {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the closed triangle meets `Im w = 0` anywhere but its apex.
    pub fn crosses_real_axis_away_from_apex(&self) -> bool {
        let [apex, b, c] = self.vertices;
        let (sb, sc) = ((b[1] - apex[1]).signum(), (c[1] - apex[1]).signum());
        apex[1] != 0.0 || b[1] == apex[1] || c[1] == apex[1] || sb != sc
    }
}

/// Half-angle of every sector of an m-star.
pub(crate) fn half_angle(m: u32) -> f64 {
    PI / (4.0 * m as f64)
}

/// Sector directions `π/2m + kπ/m + rotation`, `k = 0..2m`; the real
/// directions 0 and π fall in gaps, so the segment is only met at the apex.
pub(crate) fn sector_directions(m: u32, rotation: f64) -> Vec<f64> {
    let m_f = m as f64;
    (0..2 * m).map(|k| PI / (2.0 * m_f) + k as f64 * PI / m_f + rotation).collect()
}

pub(crate) fn star_triangles(center: [f64; 2], m: u32, length: f64, rotation: f64) -> Vec<Triangle> {
    let delta = half_angle(m);
    sector_directions(m, rotation)
        .into_iter()
        .map(|theta| {
            let tip = |a: f64| [center[0] + length * a.cos(), center[1] + length * a.sin()];
            Triangle { vertices: [center, tip(theta - delta), tip(theta + delta)] }
        })
        .collect()
}

/// Triangles sharing an apex meet only there when their angular sectors
/// (seen from the apex) are pairwise disjoint.
pub(crate) fn triangles_meet_only_at_apex(tris: &[Triangle]) -> bool {
    let mut spans: Vec<(f64, f64)> = tris
        .iter()
        .map(|t| {
            let [o, b, c] = t.vertices;
            let ang = |v: [f64; 2]| (v[1] - o[1]).atan2(v[0] - o[0]).rem_euclid(2.0 * PI);
            let (a1, a2) = (ang(b), ang(c));
            if a2 >= a1 { (a1, a2) } else { (a1, a2 + 2.0 * PI) }
        })
        .collect();
    if tris.iter().any(|t| t.vertices[0] != tris[0].vertices[0]) {
        return false;
    }
    spans.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = spans.len();
    (0..n).all(|i| {
        let next = spans[(i + 1) % n].0 + if i + 1 == n { 2.0 * PI } else { 0.0 };
        spans[i].1 < next && spans[i].1 - spans[i].0 < PI
    })
}
