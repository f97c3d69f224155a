use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geometry::{validate, Edge, Label, LabeledNetwork, Vec2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CircleSpec {
    pub r0: f64,
    pub segments: usize,
    pub center: [f64; 2],
}

impl Default for CircleSpec {
    fn default() -> Self {
        Self {
            r0: 0.5,
            segments: 256,
            center: [0.0, 0.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoCirclesSpec {
    pub r0: f64,
    /// Distance between the centers.
    pub separation: f64,
    pub segments: usize,
}

impl Default for TwoCirclesSpec {
    fn default() -> Self {
        Self {
            r0: 0.25,
            separation: 0.8,
            segments: 128,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LensSpec {
    /// Radius of the two arcs.
    pub radius: f64,
    /// Half the opening angle of each arc, in degrees.
    pub half_angle: f64,
    pub spacing: Option<f64>,
}

impl Default for LensSpec {
    fn default() -> Self {
        Self {
            radius: 0.5,
            half_angle: 60.0,
            spacing: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DoubleBubbleSpec {
    pub r: f64,
    pub spacing: Option<f64>,
}

impl Default for DoubleBubbleSpec {
    fn default() -> Self {
        Self {
            r: 0.3,
            spacing: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoxedSpec {
    /// Half side of the square holding the interfaces.
    pub half_width: f64,
    pub spacing: Option<f64>,
}

impl Default for BoxedSpec {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            spacing: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub cells: usize,
    pub size: f64,
    /// Interior vertex jitter as a fraction of the cell size.
    pub jitter: f64,
    pub spacing: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            cells: 3,
            size: 1.0,
            jitter: 0.0,
            spacing: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VoronoiSpec {
    pub size: f64,
    pub spacing: Option<f64>,
}

impl Default for VoronoiSpec {
    fn default() -> Self {
        Self {
            size: 1.0,
            spacing: None,
        }
    }
}

/// Initial networks. The exterior grain always carries the largest label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    Circle(CircleSpec),
    TwoCircles(TwoCirclesSpec),
    Lens(LensSpec),
    DoubleBubble(DoubleBubbleSpec),
    SteinerJunction(BoxedSpec),
    StraightLine(BoxedSpec),
    GridGrains(GridSpec),
    VoronoiRandom(VoronoiSpec),
}

pub const SCENARIO_KINDS: [&str; 8] = [
    "circle",
    "two-circles",
    "lens",
    "double-bubble",
    "steiner-junction",
    "straight-line",
    "grid-grains",
    "voronoi-random",
];

impl Scenario {
    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Circle(_) => "circle",
            Scenario::TwoCircles(_) => "two-circles",
            Scenario::Lens(_) => "lens",
            Scenario::DoubleBubble(_) => "double-bubble",
            Scenario::SteinerJunction(_) => "steiner-junction",
            Scenario::StraightLine(_) => "straight-line",
            Scenario::GridGrains(_) => "grid-grains",
            Scenario::VoronoiRandom(_) => "voronoi-random",
        }
    }

    /// Default parameters for a scenario name.
    pub fn by_name(kind: &str) -> Option<Self> {
        Some(match kind {
            "circle" => Scenario::Circle(Default::default()),
            "two-circles" => Scenario::TwoCircles(Default::default()),
            "lens" => Scenario::Lens(Default::default()),
            "double-bubble" => Scenario::DoubleBubble(Default::default()),
            "steiner-junction" => Scenario::SteinerJunction(Default::default()),
            "straight-line" => Scenario::StraightLine(Default::default()),
            "grid-grains" => Scenario::GridGrains(Default::default()),
            "voronoi-random" => Scenario::VoronoiRandom(Default::default()),
            _ => return None,
        })
    }

    /// Number of labels (exterior included) the scenario produces, if fixed.
    pub fn label_count(&self) -> Option<u32> {
        match self {
            Scenario::Circle(_) | Scenario::Lens(_) => Some(2),
            Scenario::TwoCircles(_) | Scenario::DoubleBubble(_) | Scenario::StraightLine(_) => {
                Some(3)
            }
            Scenario::SteinerJunction(_) => Some(4),
            Scenario::GridGrains(g) => Some((g.cells * g.cells) as u32 + 1),
            Scenario::VoronoiRandom(_) => None,
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Scenario::Circle(_) => "one disc in the plane",
            Scenario::TwoCircles(_) => "two disjoint discs",
            Scenario::Lens(_) => "grain bounded by two circular arcs meeting at corners",
            Scenario::DoubleBubble(_) => {
                "two equal lobes with a flat shared wall and 120 degree triple junctions"
            }
            Scenario::SteinerJunction(_) => "three rays at 120 degrees inside a large square",
            Scenario::StraightLine(_) => "large square cut in half by a straight interface",
            Scenario::GridGrains(_) => "square grid of grains",
            Scenario::VoronoiRandom(_) => "Voronoi cells of random sites in a square",
        }
    }
}

/// Builds the initial network. `n` is the requested number of labels
/// (exterior included), `h_res` the target vertex spacing used when the
/// scenario does not fix its own resolution.
pub fn build_scenario(
    sc: &Scenario,
    n: u32,
    seed: u64,
    h_res: f64,
) -> Result<LabeledNetwork, ConfigError> {
    if let Some(expected) = sc.label_count() {
        if n != expected {
            return Err(ConfigError::new(
                "N",
                format!("{} needs N = {expected}, got {n}", sc.kind()),
            ));
        }
    }
    let spacing = |s: Option<f64>| -> Result<f64, ConfigError> {
        let h = s.unwrap_or(h_res);
        if h > 0.0 {
            Ok(h)
        } else {
            Err(ConfigError::new("geometry.spacing", "must be positive"))
        }
    };
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(ConfigError::new(
                format!("geometry.{name}"),
                format!("must be positive, got {v}"),
            ))
        }
    };
    let mut b = Builder::default();
    match sc {
        Scenario::Circle(c) => {
            positive("r0", c.r0)?;
            if c.segments < 3 {
                return Err(ConfigError::new(
                    "geometry.segments",
                    "need at least 3 segments",
                ));
            }
            b.circle(
                Vec2::new(c.center[0], c.center[1]),
                c.r0,
                c.segments,
                Label(1),
                Label(2),
            );
        }
        Scenario::TwoCircles(c) => {
            positive("r0", c.r0)?;
            if c.separation <= 2.0 * c.r0 {
                return Err(ConfigError::new("geometry.separation", "discs overlap"));
            }
            b.circle(
                Vec2::new(-0.5 * c.separation, 0.0),
                c.r0,
                c.segments,
                Label(1),
                Label(3),
            );
            b.circle(
                Vec2::new(0.5 * c.separation, 0.0),
                c.r0,
                c.segments,
                Label(2),
                Label(3),
            );
        }
        Scenario::Lens(l) => {
            positive("radius", l.radius)?;
            if !(l.half_angle > 0.0 && l.half_angle < 90.0) {
                return Err(ConfigError::new(
                    "geometry.half_angle",
                    "must lie in (0, 90)",
                ));
            }
            let h = spacing(l.spacing)?;
            let a = l.half_angle.to_radians();
            let half_chord = l.radius * a.sin();
            let off = l.radius * a.cos();
            let top = b.vertex(Vec2::new(0.0, half_chord));
            let bottom = b.vertex(Vec2::new(0.0, -half_chord));
            // Right arc centered left of the chord, left arc centered right.
            b.arc(
                Vec2::new(-off, 0.0),
                l.radius,
                -a,
                a,
                bottom,
                top,
                h,
                Label(1),
                Label(2),
            );
            b.arc(
                Vec2::new(off, 0.0),
                l.radius,
                PI - a,
                PI + a,
                top,
                bottom,
                h,
                Label(1),
                Label(2),
            );
        }
        Scenario::DoubleBubble(d) => {
            positive("r", d.r)?;
            let h = spacing(d.spacing)?;
            let r = d.r;
            let y = r * 3f64.sqrt() / 2.0;
            let top = b.vertex(Vec2::new(0.0, y));
            let bottom = b.vertex(Vec2::new(0.0, -y));
            let third = PI / 3.0;
            b.arc(
                Vec2::new(-0.5 * r, 0.0),
                r,
                third,
                2.0 * PI - third,
                top,
                bottom,
                h,
                Label(1),
                Label(3),
            );
            b.arc(
                Vec2::new(0.5 * r, 0.0),
                r,
                -2.0 * third,
                2.0 * third,
                bottom,
                top,
                h,
                Label(2),
                Label(3),
            );
            b.segment(bottom, top, h, Label(1), Label(2));
        }
        Scenario::StraightLine(s) => {
            positive("half_width", s.half_width)?;
            let h = spacing(s.spacing)?;
            let w = s.half_width;
            let c = [
                Vec2::new(-w, -w),
                Vec2::new(w, -w),
                Vec2::new(w, 0.0),
                Vec2::new(w, w),
                Vec2::new(-w, w),
                Vec2::new(-w, 0.0),
            ];
            let v: Vec<usize> = c.iter().map(|p| b.vertex(*p)).collect();
            let (up, down, ext) = (Label(1), Label(2), Label(3));
            b.segment(v[0], v[1], h, down, ext);
            b.segment(v[1], v[2], h, down, ext);
            b.segment(v[2], v[3], h, up, ext);
            b.segment(v[3], v[4], h, up, ext);
            b.segment(v[4], v[5], h, up, ext);
            b.segment(v[5], v[0], h, down, ext);
            b.segment(v[5], v[2], h, up, down);
        }
        Scenario::SteinerJunction(s) => {
            positive("half_width", s.half_width)?;
            let h = spacing(s.spacing)?;
            let w = s.half_width;
            let t = w * (PI / 6.0).tan();
            // Rays at 90, 210 and 330 degrees hit the walls at these points.
            let hits = [Vec2::new(0.0, w), Vec2::new(-w, -t), Vec2::new(w, -t)];
            let corners = [
                Vec2::new(-w, w),
                Vec2::new(-w, -w),
                Vec2::new(w, -w),
                Vec2::new(w, w),
            ];
            let o = b.vertex(Vec2::zeros());
            let hv: Vec<usize> = hits.iter().map(|p| b.vertex(*p)).collect();
            let cv: Vec<usize> = corners.iter().map(|p| b.vertex(*p)).collect();
            let (a, bb, c, ext) = (Label(1), Label(2), Label(3), Label(4));
            // Grain a: upper left, bb: bottom, c: upper right.
            b.segment(o, hv[0], h, a, c);
            b.segment(o, hv[1], h, bb, a);
            b.segment(o, hv[2], h, c, bb);
            b.segment(hv[0], cv[0], h, a, ext);
            b.segment(cv[0], hv[1], h, a, ext);
            b.segment(hv[1], cv[1], h, bb, ext);
            b.segment(cv[1], cv[2], h, bb, ext);
            b.segment(cv[2], hv[2], h, bb, ext);
            b.segment(hv[2], cv[3], h, c, ext);
            b.segment(cv[3], hv[0], h, c, ext);
        }
        Scenario::GridGrains(g) => {
            positive("size", g.size)?;
            if g.cells == 0 {
                return Err(ConfigError::new("geometry.cells", "must be at least 1"));
            }
            if !(0.0..0.5).contains(&g.jitter) {
                return Err(ConfigError::new("geometry.jitter", "must lie in [0, 0.5)"));
            }
            let h = spacing(g.spacing)?;
            grid(&mut b, g, seed, h);
        }
        Scenario::VoronoiRandom(v) => {
            positive("size", v.size)?;
            if n < 2 {
                return Err(ConfigError::new("N", "need at least 2 labels"));
            }
            let h = spacing(v.spacing)?;
            voronoi(&mut b, (n - 1) as usize, v.size, seed, h)?;
        }
    }
    let net = LabeledNetwork::new(b.vertices, b.edges, n, Label(n), 0.0)
        .map_err(|e| ConfigError::new("scenario", e.to_string()))?;
    let bad = validate(&net);
    if let Some(v) = bad.first() {
        return Err(ConfigError::new(
            "geometry",
            format!("scenario produced an invalid network: {v}"),
        ));
    }
    Ok(net)
}

#[derive(Default)]
struct Builder {
    vertices: Vec<Vec2>,
    edges: Vec<Edge>,
}

impl Builder {
    fn vertex(&mut self, p: Vec2) -> usize {
        self.vertices.push(p);
        self.vertices.len() - 1
    }

    fn chain(&mut self, from: usize, to: usize, inner: &[Vec2], left: Label, right: Label) {
        let mut prev = from;
        for p in inner {
            let v = self.vertex(*p);
            self.edges.push(Edge::new(prev, v, left, right));
            prev = v;
        }
        self.edges.push(Edge::new(prev, to, left, right));
    }

    /// Straight edge from `a` to `b` cut into pieces no longer than `h`.
    fn segment(&mut self, a: usize, b: usize, h: f64, left: Label, right: Label) {
        let (pa, pb) = (self.vertices[a], self.vertices[b]);
        let n = ((pb - pa).norm() / h).ceil().max(1.0) as usize;
        let inner: Vec<Vec2> = (1..n)
            .map(|k| pa + (pb - pa) * (k as f64 / n as f64))
            .collect();
        self.chain(a, b, &inner, left, right);
    }

    /// Counter-clockwise arc from angle `t0` to `t1` between existing
    /// vertices, chord length at most `h`.
    #[allow(clippy::too_many_arguments)]
    fn arc(
        &mut self,
        c: Vec2,
        r: f64,
        t0: f64,
        t1: f64,
        from: usize,
        to: usize,
        h: f64,
        left: Label,
        right: Label,
    ) {
        let step = 2.0 * (h / (2.0 * r)).min(1.0).asin();
        let n = ((t1 - t0) / step).ceil().max(1.0) as usize;
        let inner: Vec<Vec2> = (1..n)
            .map(|k| {
                let t = t0 + (t1 - t0) * k as f64 / n as f64;
                c + Vec2::new(t.cos(), t.sin()) * r
            })
            .collect();
        self.chain(from, to, &inner, left, right);
    }

    fn circle(&mut self, c: Vec2, r: f64, n: usize, inside: Label, outside: Label) {
        let base = self.vertices.len();
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            self.vertex(c + Vec2::new(t.cos(), t.sin()) * r);
        }
        for k in 0..n {
            self.edges
                .push(Edge::new(base + k, base + (k + 1) % n, inside, outside));
        }
    }
}

fn grid(b: &mut Builder, g: &GridSpec, seed: u64, h: f64) {
    let m = g.cells;
    let cell = g.size / m as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = Vec2::new(-0.5 * g.size, -0.5 * g.size);
    let idx = |i: usize, j: usize| j * (m + 1) + i;
    for j in 0..=m {
        for i in 0..=m {
            let mut p = origin + Vec2::new(i as f64, j as f64) * cell;
            if i > 0 && i < m && j > 0 && j < m && g.jitter > 0.0 {
                p += Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    * (g.jitter * cell);
            }
            b.vertex(p);
        }
    }
    let ext = Label((m * m) as u32 + 1);
    let label = |i: isize, j: isize| {
        if i < 0 || j < 0 || i >= m as isize || j >= m as isize {
            ext
        } else {
            Label((j as usize * m + i as usize) as u32 + 1)
        }
    };
    for j in 0..=m {
        for i in 0..m {
            let (l, r) = (
                label(i as isize, j as isize),
                label(i as isize, j as isize - 1),
            );
            b.segment(idx(i, j), idx(i + 1, j), h, l, r);
        }
    }
    for j in 0..m {
        for i in 0..=m {
            let (l, r) = (
                label(i as isize - 1, j as isize),
                label(i as isize, j as isize),
            );
            b.segment(idx(i, j), idx(i, j + 1), h, l, r);
        }
    }
}

/// Clips a convex polygon to the half-plane closer to `a` than to `b`.
fn clip(poly: &[Vec2], a: Vec2, b: Vec2) -> Vec<Vec2> {
    let n = b - a;
    let m = (a + b) * 0.5;
    let side = |p: Vec2| (p - m).dot(&n);
    let mut out = Vec::new();
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let (sp, sq) = (side(p), side(q));
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            out.push(p + (q - p) * (sp / (sp - sq)));
        }
    }
    out
}

fn voronoi(b: &mut Builder, cells: usize, size: f64, seed: u64, h: f64) -> Result<(), ConfigError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = 0.5 * size;
    let sites: Vec<Vec2> = (0..cells)
        .map(|_| Vec2::new(rng.gen_range(-half..half), rng.gen_range(-half..half)) * 0.9)
        .collect();
    let square = vec![
        Vec2::new(-half, -half),
        Vec2::new(half, -half),
        Vec2::new(half, half),
        Vec2::new(-half, half),
    ];
    let tol = 1e-9 * size;
    let mut points: Vec<Vec2> = Vec::new();
    let mut snap = |p: Vec2| -> usize {
        if let Some(i) = points.iter().position(|q| (q - p).norm() <= tol) {
            return i;
        }
        points.push(p);
        points.len() - 1
    };
    // Directed edges (tail, head, left label).
    let mut directed: Vec<(usize, usize, Label)> = Vec::new();
    for (i, s) in sites.iter().enumerate() {
        let mut poly = square.clone();
        for (k, o) in sites.iter().enumerate() {
            if k != i {
                poly = clip(&poly, *s, *o);
            }
        }
        let ids: Vec<usize> = poly.iter().map(|p| snap(*p)).collect();
        let mut ids_dedup: Vec<usize> = Vec::new();
        for id in ids {
            if ids_dedup.last() != Some(&id) {
                ids_dedup.push(id);
            }
        }
        while ids_dedup.len() > 1 && ids_dedup.first() == ids_dedup.last() {
            ids_dedup.pop();
        }
        for k in 0..ids_dedup.len() {
            directed.push((
                ids_dedup[k],
                ids_dedup[(k + 1) % ids_dedup.len()],
                Label(i as u32 + 1),
            ));
        }
    }
    let ext = Label(cells as u32 + 1);
    // Voronoi vertices can lie on a neighbour's edge only in degenerate
    // configurations, which random sites avoid almost surely.
    let base = b.vertices.len();
    for p in &points {
        b.vertex(*p);
    }
    let mut used = vec![false; directed.len()];
    for k in 0..directed.len() {
        if used[k] {
            continue;
        }
        used[k] = true;
        let (t, hd, l) = directed[k];
        let twin =
            (0..directed.len()).find(|&m| !used[m] && directed[m].0 == hd && directed[m].1 == t);
        let right = match twin {
            Some(m) => {
                used[m] = true;
                directed[m].2
            }
            None => ext,
        };
        b.segment(base + t, base + hd, h, l, right);
    }
    if points.len() < 3 {
        return Err(ConfigError::new("geometry", "degenerate Voronoi diagram"));
    }
    Ok(())
}
