#![allow(dead_code)]

use std::path::PathBuf;

use morphoprot::ingest::{parse_pdb, Atom, StructureModel};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn fixture(name: &str) -> StructureModel {
    let text = std::fs::read_to_string(data_path(name)).expect("fixture readable");
    parse_pdb(&text, false).expect("fixture parses")
}

pub fn map_coords(model: &StructureModel, f: impl Fn([f64; 3]) -> [f64; 3]) -> StructureModel {
    let atoms = model
        .atoms
        .iter()
        .map(|a| {
            let [x, y, z] = f(a.position());
            Atom { x, y, z, ..a.clone() }
        })
        .collect();
    StructureModel { pdb_id: model.pdb_id.clone(), atoms }
}

/// Square point lattice repeated on `layers` z-levels, shifted per layer.
pub fn lattice(n: usize, layers: usize) -> StructureModel {
    let mut atoms = Vec::new();
    for l in 0..layers {
        let off = (l as f64 * 0.618).fract();
        for i in 0..n {
            for j in 0..n {
                atoms.push(Atom {
                    serial: atoms.len() as u32 + 1,
                    name: "CA".into(),
                    residue_name: "GLY".into(),
                    chain_id: 'A',
                    residue_seq: 1,
                    x: -1.0 + 2.0 * (i as f64 + off) / n as f64,
                    y: -1.0 + 2.0 * (j as f64 + off * 0.7) / n as f64,
                    z: -1.0 + 2.0 * (l as f64 + 0.5) / layers as f64,
                    is_hetero: false,
                });
            }
        }
    }
    StructureModel { pdb_id: "lattice".into(), atoms }
}
