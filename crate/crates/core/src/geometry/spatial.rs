use std::collections::HashMap;

use super::{BBox, Vec2};

type Cell = (i64, i64);

fn cell_of(p: Vec2, size: f64) -> Cell {
    ((p.x / size).floor() as i64, (p.y / size).floor() as i64)
}

/// Uniform hash grid over segments. Queries return candidate ids in
/// ascending order, so summations over them are deterministic.
#[derive(Clone, Debug)]
pub struct SegmentGrid {
    size: f64,
    cells: HashMap<Cell, Vec<usize>>,
}

impl SegmentGrid {
    pub fn new(size: f64, segments: impl IntoIterator<Item = (usize, Vec2, Vec2)>) -> Self {
        assert!(size > 0.0);
        let mut cells: HashMap<Cell, Vec<usize>> = HashMap::new();
        for (id, a, b) in segments {
            let lo = cell_of(Vec2::new(a.x.min(b.x), a.y.min(b.y)), size);
            let hi = cell_of(Vec2::new(a.x.max(b.x), a.y.max(b.y)), size);
            for i in lo.0..=hi.0 {
                for j in lo.1..=hi.1 {
                    cells.entry((i, j)).or_default().push(id);
                }
            }
        }
        Self { size, cells }
    }

    pub fn cell_size(&self) -> f64 {
        self.size
    }

    /// Segments whose bounding boxes may meet `bx`.
    pub fn query_box(&self, bx: &BBox) -> Vec<usize> {
        let lo = cell_of(bx.min, self.size);
        let hi = cell_of(bx.max, self.size);
        let mut out = Vec::new();
        if (hi.0 - lo.0 + 1) * (hi.1 - lo.1 + 1) > 4 * self.cells.len() as i64 {
            for ids in self.cells.values() {
                out.extend_from_slice(ids);
            }
        } else {
            for i in lo.0..=hi.0 {
                for j in lo.1..=hi.1 {
                    if let Some(ids) = self.cells.get(&(i, j)) {
                        out.extend_from_slice(ids);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn query_disc(&self, center: Vec2, r: f64) -> Vec<usize> {
        self.query_box(&BBox::new(
            center - Vec2::new(r, r),
            center + Vec2::new(r, r),
        ))
    }
}

/// Uniform hash grid over points.
#[derive(Clone, Debug)]
pub struct PointGrid {
    size: f64,
    cells: HashMap<Cell, Vec<usize>>,
}

impl PointGrid {
    pub fn new(size: f64, points: impl IntoIterator<Item = (usize, Vec2)>) -> Self {
        assert!(size > 0.0);
        let mut cells: HashMap<Cell, Vec<usize>> = HashMap::new();
        for (id, p) in points {
            cells.entry(cell_of(p, size)).or_default().push(id);
        }
        Self { size, cells }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn query_box(&self, bx: &BBox) -> Vec<usize> {
        let lo = cell_of(bx.min, self.size);
        let hi = cell_of(bx.max, self.size);
        let mut out = Vec::new();
        if (hi.0 - lo.0 + 1) * (hi.1 - lo.1 + 1) > 4 * self.cells.len() as i64 {
            for ids in self.cells.values() {
                out.extend_from_slice(ids);
            }
        } else {
            for i in lo.0..=hi.0 {
                for j in lo.1..=hi.1 {
                    if let Some(ids) = self.cells.get(&(i, j)) {
                        out.extend_from_slice(ids);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn query_disc(&self, center: Vec2, r: f64) -> Vec<usize> {
        self.query_box(&BBox::new(
            center - Vec2::new(r, r),
            center + Vec2::new(r, r),
        ))
    }
}
