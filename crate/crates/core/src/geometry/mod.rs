//! Labeled planar partitions: polygonal boundary networks, grain areas,
//! weighted lengths and reduced boundaries.

mod measure;
mod network;
mod random;
mod spatial;
mod validate;

pub use measure::{
    grain_area, grain_summaries, mass_in_ball, mass_in_box, reduced_boundary, signed_areas,
    total_mass, BoundaryEdge, GrainSummary,
};
pub use network::{Edge, GrainLabel, HalfEdge, Label, LabeledNetwork};
pub use random::random_partition;
pub use spatial::{PointGrid, SegmentGrid};
pub use validate::{validate, Violation};

pub type Vec2 = nalgebra::Vector2<f64>;

/// 2D cross product.
#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Rotation by -90 degrees: the right-hand normal of a direction.
#[inline]
pub fn right_normal(t: Vec2) -> Vec2 {
    Vec2::new(t.y, -t.x)
}

/// Axis-aligned closed box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Vec2,
    pub max: Vec2,
}

impl BBox {
    pub fn new(min: Vec2, max: Vec2) -> Self {
        Self { min, max }
    }

    pub fn of_points(points: impl IntoIterator<Item = Vec2>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut b = BBox::new(first, first);
        for p in it {
            b.include(p);
        }
        Some(b)
    }

    pub fn include(&mut self, p: Vec2) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn expanded(&self, pad: f64) -> Self {
        Self::new(
            self.min - Vec2::new(pad, pad),
            self.max + Vec2::new(pad, pad),
        )
    }

    pub fn diameter(&self) -> f64 {
        (self.max - self.min).norm()
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn contains_box(&self, other: &BBox) -> bool {
        self.contains(other.min) && self.contains(other.max)
    }

    pub fn intersects(&self, other: &BBox) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
    }
}

/// Length of the part of segment `[a, b]` inside the closed box.
pub fn clip_length_box(a: Vec2, b: Vec2, bx: &BBox) -> f64 {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for k in 0..2 {
        let (lo, hi) = (bx.min[k], bx.max[k]);
        if d[k].abs() < 1e-300 {
            if a[k] < lo || a[k] > hi {
                return 0.0;
            }
        } else {
            let mut ta = (lo - a[k]) / d[k];
            let mut tb = (hi - a[k]) / d[k];
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            t0 = t0.max(ta);
            t1 = t1.min(tb);
        }
    }
    if t1 > t0 {
        (t1 - t0) * d.norm()
    } else {
        0.0
    }
}

/// Length of the part of segment `[a, b]` inside the closed disc.
pub fn clip_length_disc(a: Vec2, b: Vec2, center: Vec2, r: f64) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return 0.0;
    }
    let f = a - center;
    // |f + t d|^2 = r^2
    let bq = f.dot(&d) / len2;
    let cq = (f.norm_squared() - r * r) / len2;
    let disc = bq * bq - cq;
    if disc <= 0.0 {
        return 0.0;
    }
    let s = disc.sqrt();
    let t0 = (-bq - s).max(0.0);
    let t1 = (-bq + s).min(1.0);
    if t1 > t0 {
        (t1 - t0) * len2.sqrt()
    } else {
        0.0
    }
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&d) / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Distance between two closed segments (zero if they intersect).
pub fn segment_distance(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> f64 {
    if segments_cross(a, b, c, d).is_some() {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Proper or touching intersection point of two segments, if any.
pub fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> Option<Vec2> {
    let r = b - a;
    let s = d - c;
    let denom = cross(r, s);
    if denom.abs() <= 1e-12 * r.norm() * s.norm() {
        return None;
    }
    let t = cross(c - a, s) / denom;
    let u = cross(c - a, r) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(a + r * t)
    } else {
        None
    }
}

/// Signed area of a closed polygon (counter-clockwise positive).
pub fn polygon_signed_area(points: &[Vec2]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        s += cross(points[i], points[(i + 1) % n]);
    }
    0.5 * s
}

pub fn triangle_area(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    0.5 * cross(b - a, c - a).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_pieces_of_a_slanted_ray_are_apart() {
        let dir = Vec2::new(-(3f64.sqrt()) / 2.0, -0.5);
        let at = |k: f64| dir * (k * 1.1547005383792517 / 12.0);
        let d = segment_distance(at(5.0), at(6.0), at(7.0), at(8.0));
        assert!((d - 1.1547005383792517 / 12.0).abs() < 1e-12, "{d}");
        assert_eq!(
            segment_distance(Vec2::zeros(), at(2.0), at(1.0), at(3.0)),
            0.0
        );
        assert!(segments_cross(
            Vec2::new(-1.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, -1.0),
            Vec2::new(0.0, 1.0)
        )
        .is_some());
    }
}
