use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::IoError;
use crate::geometry::{Edge, Label, LabeledNetwork, Vec2};
use crate::stepper::Frame;

#[derive(Serialize, Deserialize)]
struct SnapshotFile {
    k: usize,
    t: f64,
    n_grains: u32,
    exterior: Label,
    vertices: Vec<[f64; 2]>,
    edges: Vec<Edge>,
}

/// Serializes a frame as JSON. Floats use shortest round-trip formatting,
/// so reading and re-writing reproduces the same bytes.
pub fn snapshot_to_string(frame: &Frame) -> String {
    let file = SnapshotFile {
        k: frame.k,
        t: frame.t,
        n_grains: frame.net.n_grains(),
        exterior: frame.net.exterior(),
        vertices: frame.net.vertices().iter().map(|p| [p.x, p.y]).collect(),
        edges: frame.net.edges().to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("snapshot serializes");
    s.push('\n');
    s
}

pub fn snapshot_from_str(s: &str) -> Result<Frame, IoError> {
    parse(s, Path::new("<string>"))
}

fn parse(s: &str, path: &Path) -> Result<Frame, IoError> {
    let f: SnapshotFile = serde_json::from_str(s).map_err(|e| IoError::Snapshot {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let vertices = f.vertices.iter().map(|p| Vec2::new(p[0], p[1])).collect();
    let net = LabeledNetwork::new(vertices, f.edges, f.n_grains, f.exterior, f.t)?;
    Ok(Frame {
        k: f.k,
        t: f.t,
        net,
    })
}

pub fn write_snapshot(path: &Path, frame: &Frame) -> Result<(), IoError> {
    fs::write(path, snapshot_to_string(frame)).map_err(|e| IoError::file(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<Frame, IoError> {
    let s = fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    parse(&s, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{build_scenario, Scenario};

    #[test]
    fn round_trip_is_byte_identical() {
        let net =
            build_scenario(&Scenario::by_name("voronoi-random").unwrap(), 6, 3, 0.03).unwrap();
        let frame = Frame {
            k: 17,
            t: 0.1 + 0.2,
            net: net.with_time(0.1 + 0.2),
        };
        let a = snapshot_to_string(&frame);
        let back = snapshot_from_str(&a).unwrap();
        assert_eq!(back, frame);
        assert_eq!(snapshot_to_string(&back), a);
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(matches!(
            snapshot_from_str("{"),
            Err(IoError::Snapshot { .. })
        ));
    }
}
