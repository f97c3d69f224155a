use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, Label, LabeledNetwork, Vec2};

/// Jittered m x m grid of cells with random labels (equal neighbours give
/// interior edges), wiggly subdivided edges, some very short pieces and
/// small triangular islands.
pub fn random_partition(seed: u64) -> LabeledNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m: usize = rng.gen_range(2..=4);
    let k: u32 = rng.gen_range(2..=4);
    let ext = Label(k + 1);
    let h = 1.0 / m as f64;
    let mut pts = Vec::new();
    for j in 0..=m {
        for i in 0..=m {
            let mut p = Vec2::new(i as f64 * h, j as f64 * h);
            if i > 0 && i < m && j > 0 && j < m {
                p += Vec2::new(rng.gen_range(-0.25..0.25), rng.gen_range(-0.25..0.25)) * h;
            }
            pts.push(p);
        }
    }
    let cells: Vec<Label> = (0..m * m).map(|_| Label(rng.gen_range(1..=k))).collect();
    let cell = |i: isize, j: isize| {
        if i < 0 || j < 0 || i >= m as isize || j >= m as isize {
            ext
        } else {
            cells[j as usize * m + i as usize]
        }
    };
    let idx = |i: usize, j: usize| j * (m + 1) + i;
    let mut edges = Vec::new();
    let mut add = |pts: &mut Vec<Vec2>,
                   a: usize,
                   b: usize,
                   left: Label,
                   right: Label,
                   rng: &mut ChaCha8Rng| {
        if left == ext && right == ext {
            return;
        }
        let pieces: usize = rng.gen_range(1..=4);
        let (pa, pb) = (pts[a], pts[b]);
        let n = Vec2::new(-(pb - pa).y, (pb - pa).x) / (pb - pa).norm();
        let mut prev = a;
        let short = rng.gen_bool(0.3);
        for s in 1..pieces {
            let mut t = s as f64 / pieces as f64;
            if short && s == 1 {
                t = rng.gen_range(0.001..0.02) / (pb - pa).norm();
            }
            let amp = if rng.gen_bool(0.5) { 2e-3 } else { 2e-5 };
            pts.push(pa + (pb - pa) * t + n * rng.gen_range(-amp..amp));
            let v = pts.len() - 1;
            edges.push(Edge::new(prev, v, left, right));
            prev = v;
        }
        edges.push(Edge::new(prev, b, left, right));
    };
    for j in 0..=m {
        for i in 0..m {
            let (l, r) = (
                cell(i as isize, j as isize),
                cell(i as isize, j as isize - 1),
            );
            add(&mut pts, idx(i, j), idx(i + 1, j), l, r, &mut rng);
        }
    }
    for j in 0..m {
        for i in 0..=m {
            let (l, r) = (
                cell(i as isize - 1, j as isize),
                cell(i as isize, j as isize),
            );
            add(&mut pts, idx(i, j), idx(i, j + 1), l, r, &mut rng);
        }
    }
    for j in 0..m {
        for i in 0..m {
            if rng.gen_bool(0.3) {
                let host = cell(i as isize, j as isize);
                let island = Label(if host.0 == k { 1 } else { host.0 + 1 });
                let c = (pts[idx(i, j)] + pts[idx(i + 1, j + 1)]) * 0.5;
                let size = rng.gen_range(0.003..0.15 * h);
                let b = pts.len();
                for q in 0..3 {
                    let a = 0.3 + q as f64 * 2.0 * std::f64::consts::PI / 3.0;
                    pts.push(c + Vec2::new(a.cos(), a.sin()) * size);
                }
                for q in 0..3 {
                    edges.push(Edge::new(b + q, b + (q + 1) % 3, island, host));
                }
            }
        }
    }
    LabeledNetwork::new(pts, edges, k + 1, ext, 0.0).unwrap()
}
