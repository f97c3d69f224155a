use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{
    grain_area, point_segment_distance, triangle_area, BBox, Edge, HalfEdge, Label, LabeledNetwork,
    Vec2,
};
use crate::kernels::WeightOmega;

/// Move families, in tie-breaking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    RemoveInteriorEdge,
    CollapseShortEdge,
    StraightenChain,
    VanishSmallGrain,
    SplitJunction,
    Identity,
}

impl MoveKind {
    pub fn name(&self) -> &'static str {
        match self {
            MoveKind::RemoveInteriorEdge => "remove-interior-edge",
            MoveKind::CollapseShortEdge => "collapse-short-edge",
            MoveKind::StraightenChain => "straighten-chain",
            MoveKind::VanishSmallGrain => "vanish-small-grain",
            MoveKind::SplitJunction => "split-junction",
            MoveKind::Identity => "identity",
        }
    }
}

/// Vertex referenced by a move: an existing vertex or one the move creates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VRef {
    Old(usize),
    New(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewEdge {
    pub tail: VRef,
    pub head: VRef,
    pub left: Label,
    pub right: Label,
}

/// A local deformation `f` with everything needed to certify it: the
/// region `C` it acts in, `sup |f(x) - x|`, per-grain upper bounds on the
/// area of `f(E_i) \triangle E_i`, and the resulting edge surgery.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationMove {
    pub kind: MoveKind,
    /// Lowest edge id involved, for tie-breaking.
    pub anchor: usize,
    pub variant: usize,
    pub support: BBox,
    pub displacement: f64,
    pub volume_deltas: Vec<(Label, f64)>,
    pub removed_edges: Vec<usize>,
    pub new_vertices: Vec<Vec2>,
    pub added_edges: Vec<NewEdge>,
    /// Weighted mass change; negative when the move shortens the boundary.
    pub mass_delta: f64,
}

impl DeformationMove {
    /// `f(x) = x`.
    pub fn identity() -> Self {
        Self {
            kind: MoveKind::Identity,
            anchor: usize::MAX,
            variant: 0,
            support: BBox::new(Vec2::zeros(), Vec2::zeros()),
            displacement: 0.0,
            volume_deltas: Vec::new(),
            removed_edges: Vec::new(),
            new_vertices: Vec::new(),
            added_edges: Vec::new(),
            mass_delta: 0.0,
        }
    }

    pub fn drop(&self) -> f64 {
        -self.mass_delta
    }

    pub fn max_volume_delta(&self) -> f64 {
        self.volume_deltas.iter().map(|d| d.1).fold(0.0, f64::max)
    }

    pub fn point(&self, net: &LabeledNetwork, r: VRef) -> Vec2 {
        match r {
            VRef::Old(v) => net.vertex(v),
            VRef::New(k) => self.new_vertices[k],
        }
    }

    pub fn new_segments(&self, net: &LabeledNetwork) -> Vec<(Vec2, Vec2)> {
        self.added_edges
            .iter()
            .map(|e| (self.point(net, e.tail), self.point(net, e.head)))
            .collect()
    }

    fn finish(mut self, net: &LabeledNetwork, w: &WeightOmega) -> Self {
        let removed: f64 = self
            .removed_edges
            .iter()
            .map(|&e| {
                let (a, b) = net.segment(e);
                w.segment_integral(a, b)
            })
            .sum();
        let added: f64 = self
            .new_segments(net)
            .iter()
            .map(|(a, b)| w.segment_integral(*a, *b))
            .sum();
        self.mass_delta = added - removed;
        self
    }
}

fn add_delta(deltas: &mut Vec<(Label, f64)>, l: Label, a: f64) {
    match deltas.iter_mut().find(|d| d.0 == l) {
        Some(d) => d.1 += a,
        None => deltas.push((l, a)),
    }
}

fn add_edge_delta(deltas: &mut Vec<(Label, f64)>, e: &Edge, a: f64) {
    add_delta(deltas, e.left, a);
    if e.right != e.left {
        add_delta(deltas, e.right, a);
    }
}

/// Shared lookups for enumeration.
struct Ctx<'a> {
    net: &'a LabeledNetwork,
    incident: Vec<Vec<usize>>,
    stars: Vec<Vec<HalfEdge>>,
}

impl<'a> Ctx<'a> {
    fn new(net: &'a LabeledNetwork) -> Self {
        let mut incident = vec![Vec::new(); net.vertices().len()];
        for (i, e) in net.edges().iter().enumerate() {
            incident[e.tail].push(i);
            incident[e.head].push(i);
        }
        Self {
            net,
            incident,
            stars: net.stars(),
        }
    }

    fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        self.incident[v]
            .iter()
            .map(|&e| self.net.edge(e).other_end(v))
            .collect()
    }

    fn connected(&self, a: usize, b: usize) -> bool {
        self.incident[a]
            .iter()
            .any(|&e| self.net.edge(e).other_end(a) == b)
    }

    /// Replaces edge `f` by a copy whose endpoint `at` moves to `to`,
    /// optionally keeping the far part from `split` on unchanged.
    fn reattach(&self, f: usize, at: usize, to: VRef, split: Option<VRef>, out: &mut Vec<NewEdge>) {
        let e = self.net.edge(f);
        let far = VRef::Old(e.other_end(at));
        let (l, r) = (e.left, e.right);
        let outgoing = e.tail == at;
        let mut push = |a: VRef, b: VRef| {
            if outgoing {
                out.push(NewEdge {
                    tail: a,
                    head: b,
                    left: l,
                    right: r,
                });
            } else {
                out.push(NewEdge {
                    tail: b,
                    head: a,
                    left: l,
                    right: r,
                });
            }
        };
        match split {
            None => push(to, far),
            Some(q) => {
                push(to, q);
                push(q, far);
            }
        }
    }
}

/// Every candidate move for the current network at scale `j`.
pub fn enumerate_moves(net: &LabeledNetwork, j: u32, w: &WeightOmega) -> Vec<DeformationMove> {
    let ctx = Ctx::new(net);
    let jf = j as f64;
    let mut out = interior_chain_moves(&ctx);
    out.extend(collapse_moves(&ctx, jf));
    out.extend(straighten_moves(&ctx, jf));
    out.extend(vanish_moves(&ctx, jf));
    out.extend(split_moves(&ctx, jf));
    out.into_par_iter()
        .filter(|m| stars_consistent(&ctx, m))
        .map(|m| m.finish(net, w))
        .collect()
}

fn interior_chain_moves(ctx: &Ctx) -> Vec<DeformationMove> {
    let net = ctx.net;
    let n = net.edges().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let nx = p[c];
            p[c] = r;
            c = nx;
        }
        r
    }
    for inc in &ctx.incident {
        if let [a, b] = inc[..] {
            let (ea, eb) = (net.edge(a), net.edge(b));
            if ea.is_interior() && eb.is_interior() && ea.left == eb.left {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for e in 0..n {
        if net.edge(e).is_interior() {
            let r = find(&mut parent, e);
            groups.entry(r).or_default().push(e);
        }
    }
    groups
        .into_values()
        .map(|edges| {
            let pts = edges.iter().flat_map(|&e| {
                let (a, b) = net.segment(e);
                [a, b]
            });
            let label = net.edge(edges[0]).left;
            DeformationMove {
                kind: MoveKind::RemoveInteriorEdge,
                anchor: edges[0],
                variant: 0,
                support: BBox::of_points(pts).unwrap(),
                displacement: 0.0,
                volume_deltas: vec![(label, 0.0)],
                removed_edges: edges,
                new_vertices: Vec::new(),
                added_edges: Vec::new(),
                mass_delta: 0.0,
            }
        })
        .collect()
}

const LOCALIZATION_LEVELS: u32 = 6;

fn collapse_moves(ctx: &Ctx, j: f64) -> Vec<DeformationMove> {
    let net = ctx.net;
    let limit = 1.0 / (2.0 * j * j);
    let mut out = Vec::new();
    for (ei, e) in net.edges().iter().enumerate() {
        let len = net.edge_length(ei);
        if e.is_interior() || len >= limit {
            continue;
        }
        let (u, w) = (e.tail, e.head);
        let nu: Vec<usize> = ctx.neighbors(u).into_iter().filter(|&x| x != w).collect();
        let nw: Vec<usize> = ctx.neighbors(w).into_iter().filter(|&x| x != u).collect();
        if nu.iter().any(|x| nw.contains(x))
            || ctx.neighbors(u).iter().filter(|&&x| x == w).count() > 1
        {
            continue;
        }
        let incident: Vec<(usize, usize)> = ctx.incident[u]
            .iter()
            .filter(|&&f| f != ei)
            .map(|&f| (f, u))
            .chain(
                ctx.incident[w]
                    .iter()
                    .filter(|&&f| f != ei)
                    .map(|&f| (f, w)),
            )
            .collect();
        if incident.is_empty() {
            continue;
        }
        let lmin = incident
            .iter()
            .map(|(f, _)| net.edge_length(*f))
            .fold(f64::INFINITY, f64::min);
        let m = (net.vertex(u) + net.vertex(w)) * 0.5;
        for level in 0..=LOCALIZATION_LEVELS {
            let rho = if level == 0 {
                None
            } else {
                Some(lmin / 2f64.powi(level as i32))
            };
            let mut mv = DeformationMove {
                kind: MoveKind::CollapseShortEdge,
                anchor: ei.min(incident.iter().map(|p| p.0).min().unwrap()),
                variant: level as usize,
                support: BBox::of_points([net.vertex(u), net.vertex(w)]).unwrap(),
                displacement: 0.5 * len,
                volume_deltas: Vec::new(),
                removed_edges: vec![ei],
                new_vertices: vec![m],
                added_edges: Vec::new(),
                mass_delta: 0.0,
            };
            for &(f, at) in &incident {
                let p = net.vertex(at);
                let far = net.vertex(net.edge(f).other_end(at));
                let (split, corner) = match rho {
                    None => (None, far),
                    Some(r) => {
                        let q = p + (far - p) * (r / (far - p).norm());
                        mv.new_vertices.push(q);
                        (Some(VRef::New(mv.new_vertices.len() - 1)), q)
                    }
                };
                mv.support.include(corner);
                add_edge_delta(
                    &mut mv.volume_deltas,
                    net.edge(f),
                    triangle_area(p, m, corner),
                );
                mv.removed_edges.push(f);
                ctx.reattach(f, at, VRef::New(0), split, &mut mv.added_edges);
            }
            mv.support.include(m);
            mv.removed_edges.sort_unstable();
            out.push(mv);
        }
    }
    out
}

fn straighten_moves(ctx: &Ctx, j: f64) -> Vec<DeformationMove> {
    let net = ctx.net;
    let limit = 1.0 / (4.0 * j * j);
    let mut out = Vec::new();
    for v1 in 0..net.vertices().len() {
        if ctx.degree(v1) != 2 {
            continue;
        }
        for &back in &ctx.incident[v1] {
            let start = net.edge(back).other_end(v1);
            let mut path = vec![start, v1];
            let mut edges = vec![back];
            let orient = |e: usize, from: usize| {
                let ed = net.edge(e);
                if ed.tail == from {
                    (ed.left, ed.right)
                } else {
                    (ed.right, ed.left)
                }
            };
            let labels = orient(back, start);
            if labels.0 == labels.1 {
                continue;
            }
            let mut cur = v1;
            let mut prev = back;
            for k in 1..=3 {
                let next_e = match ctx.incident[cur].iter().find(|&&f| f != prev) {
                    Some(&f) => f,
                    None => break,
                };
                if orient(next_e, cur) != labels {
                    break;
                }
                let nxt = net.edge(next_e).other_end(cur);
                if path.contains(&nxt) {
                    break;
                }
                path.push(nxt);
                edges.push(next_e);
                if edges[0] < *edges.last().unwrap() && !ctx.connected(start, nxt) {
                    if let Some(mv) = straighten_window(ctx, &path, &edges, labels, k, limit) {
                        out.push(mv);
                    }
                }
                if ctx.degree(nxt) != 2 {
                    break;
                }
                prev = next_e;
                cur = nxt;
            }
        }
    }
    out
}

fn straighten_window(
    ctx: &Ctx,
    path: &[usize],
    edges: &[usize],
    labels: (Label, Label),
    k: usize,
    limit: f64,
) -> Option<DeformationMove> {
    let net = ctx.net;
    let pts: Vec<Vec2> = path.iter().map(|&v| net.vertex(v)).collect();
    let (a, b) = (pts[0], *pts.last().unwrap());
    let poly: f64 = pts.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    if poly - (b - a).norm() <= 1e-12 * poly {
        return None;
    }
    let dev = pts[1..pts.len() - 1]
        .iter()
        .map(|&p| point_segment_distance(p, a, b))
        .fold(0.0, f64::max);
    if dev >= limit {
        return None;
    }
    let area: f64 = (1..pts.len() - 1)
        .map(|i| triangle_area(a, pts[i], pts[i + 1]))
        .sum();
    let mut removed = edges.to_vec();
    removed.sort_unstable();
    Some(DeformationMove {
        kind: MoveKind::StraightenChain,
        anchor: removed[0],
        variant: k,
        support: BBox::of_points(pts.iter().copied()).unwrap(),
        displacement: dev,
        volume_deltas: vec![(labels.0, area), (labels.1, area)],
        removed_edges: removed,
        new_vertices: Vec::new(),
        added_edges: vec![NewEdge {
            tail: VRef::Old(path[0]),
            head: VRef::Old(*path.last().unwrap()),
            left: labels.0,
            right: labels.1,
        }],
        mass_delta: 0.0,
    })
}

fn vanish_moves(ctx: &Ctx, j: f64) -> Vec<DeformationMove> {
    let limit = 1.0 / (j * j);
    ctx.net
        .bounded_labels()
        .filter_map(|l| vanish_raw(ctx.net, l, Some(limit)))
        .collect()
}

/// Relabels grain `label` to its dominant neighbour regardless of size.
/// Used by topology surgery when a grain has become degenerate.
pub fn vanish_grain(
    net: &LabeledNetwork,
    label: Label,
    w: &WeightOmega,
) -> Option<DeformationMove> {
    vanish_raw(net, label, None).map(|m| m.finish(net, w))
}

fn vanish_raw(
    net: &LabeledNetwork,
    label: Label,
    max_diam: Option<f64>,
) -> Option<DeformationMove> {
    let edges: Vec<usize> = (0..net.edges().len())
        .filter(|&e| net.edge(e).touches(label))
        .collect();
    if edges.is_empty() {
        return None;
    }
    let pts = edges.iter().flat_map(|&e| {
        let (a, b) = net.segment(e);
        [a, b]
    });
    let bx = BBox::of_points(pts).unwrap();
    let diam = bx.diameter();
    if max_diam.is_some_and(|m| diam >= m) {
        return None;
    }
    let area = match (grain_area(net, label), max_diam) {
        (Ok(a), _) => a,
        (Err(_), Some(_)) => return None,
        (Err(_), None) => edges
            .iter()
            .map(|&e| {
                let ed = net.edge(e);
                let (a, b) = net.segment(e);
                let c = 0.5 * crate::geometry::cross(a, b);
                if ed.is_interior() {
                    0.0
                } else if ed.left == label {
                    c
                } else {
                    -c
                }
            })
            .sum(),
    };
    let mut shared: Vec<(Label, f64)> = Vec::new();
    for &e in &edges {
        let ed = net.edge(e);
        if !ed.is_interior() {
            let other = if ed.left == label { ed.right } else { ed.left };
            add_delta(&mut shared, other, net.edge_length(e));
        }
    }
    shared.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let dominant = shared.first()?.0;
    let mut added = Vec::new();
    for &e in &edges {
        let ed = net.edge(e);
        let sub = |l: Label| if l == label { dominant } else { l };
        let (l, r) = (sub(ed.left), sub(ed.right));
        if l != r {
            added.push(NewEdge {
                tail: VRef::Old(ed.tail),
                head: VRef::Old(ed.head),
                left: l,
                right: r,
            });
        }
    }
    Some(DeformationMove {
        kind: MoveKind::VanishSmallGrain,
        anchor: edges[0],
        variant: 0,
        support: bx,
        displacement: diam,
        volume_deltas: vec![(label, area.abs()), (dominant, area.abs())],
        removed_edges: edges,
        new_vertices: Vec::new(),
        added_edges: added,
        mass_delta: 0.0,
    })
}

const SPLIT_OFFSETS: [f64; 2] = [0.25, 0.5];

fn split_moves(ctx: &Ctx, j: f64) -> Vec<DeformationMove> {
    let net = ctx.net;
    let limit = 1.0 / (j * j);
    let mut out = Vec::new();
    for v in 0..net.vertices().len() {
        let star = &ctx.stars[v];
        let d = star.len();
        if d < 4 {
            continue;
        }
        let p = net.vertex(v);
        let lmin = star
            .iter()
            .map(|h| net.edge_length(h.edge))
            .fold(f64::INFINITY, f64::min);
        let anchor = star.iter().map(|h| h.edge).min().unwrap();
        let mut variant = 0;
        for a in 1..d {
            for m in 2..=(d - 2) {
                if a + m > d {
                    continue;
                }
                let arc1 = &star[a..a + m];
                let dir: Vec2 = arc1.iter().map(|h| net.outward_tangent(v, h.edge)).sum();
                if dir.norm() < 1e-9 {
                    continue;
                }
                let u = dir / dir.norm();
                let label_a = net.ccw_label(arc1[m - 1]);
                let label_b = net.cw_label(arc1[0]);
                if label_a == label_b {
                    continue;
                }
                for level in 1..=LOCALIZATION_LEVELS {
                    let rho = lmin / 2f64.powi(level as i32);
                    for f in SPLIT_OFFSETS {
                        variant += 1;
                        let delta = f * rho;
                        if delta > limit {
                            continue;
                        }
                        let (p1, p2) = (p + u * delta, p - u * delta);
                        let mut mv = DeformationMove {
                            kind: MoveKind::SplitJunction,
                            anchor,
                            variant,
                            support: BBox::of_points([p, p1, p2]).unwrap(),
                            displacement: delta,
                            volume_deltas: Vec::new(),
                            removed_edges: Vec::new(),
                            new_vertices: vec![p1, p2],
                            added_edges: vec![NewEdge {
                                tail: VRef::New(1),
                                head: VRef::New(0),
                                left: label_a,
                                right: label_b,
                            }],
                            mass_delta: 0.0,
                        };
                        for (k, h) in star.iter().enumerate() {
                            let in_arc1 = k >= a && k < a + m;
                            let side = if in_arc1 { p1 } else { p2 };
                            let q = p + net.outward_tangent(v, h.edge) * rho;
                            mv.new_vertices.push(q);
                            let qi = VRef::New(mv.new_vertices.len() - 1);
                            mv.support.include(q);
                            add_edge_delta(
                                &mut mv.volume_deltas,
                                net.edge(h.edge),
                                triangle_area(p, side, q),
                            );
                            mv.removed_edges.push(h.edge);
                            let to = VRef::New(if in_arc1 { 0 } else { 1 });
                            ctx.reattach(h.edge, v, to, Some(qi), &mut mv.added_edges);
                        }
                        mv.removed_edges.sort_unstable();
                        out.push(mv);
                    }
                }
            }
        }
    }
    out
}

/// Checks that labels close up around every vertex the move rewires.
fn stars_consistent(ctx: &Ctx, mv: &DeformationMove) -> bool {
    let net = ctx.net;
    let mut centers: Vec<VRef> = Vec::new();
    for e in &mv.added_edges {
        for r in [e.tail, e.head] {
            if !centers.contains(&r) {
                centers.push(r);
            }
        }
    }
    for c in centers {
        let pc = mv.point(net, c);
        // (direction, ccw label, cw label)
        let mut spokes: Vec<(f64, Label, Label)> = Vec::new();
        if let VRef::Old(v) = c {
            for &f in &ctx.incident[v] {
                if mv.removed_edges.binary_search(&f).is_ok() {
                    continue;
                }
                let e = net.edge(f);
                let d = net.vertex(e.other_end(v)) - pc;
                let (l, r) = if e.tail == v {
                    (e.left, e.right)
                } else {
                    (e.right, e.left)
                };
                spokes.push((d.y.atan2(d.x), l, r));
            }
        }
        for e in &mv.added_edges {
            if e.tail == c || e.head == c {
                let other = if e.tail == c { e.head } else { e.tail };
                let d = mv.point(net, other) - pc;
                let (l, r) = if e.tail == c {
                    (e.left, e.right)
                } else {
                    (e.right, e.left)
                };
                spokes.push((d.y.atan2(d.x), l, r));
            }
        }
        spokes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let k = spokes.len();
        for i in 0..k {
            if spokes[i].1 != spokes[(i + 1) % k].2 {
                return false;
            }
            if k > 1 && (spokes[(i + 1) % k].0 - spokes[i].0).abs() < 1e-12 {
                return false;
            }
        }
    }
    true
}
