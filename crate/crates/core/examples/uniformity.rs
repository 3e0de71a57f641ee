//! A controllability family whose union is not uniform.

use ccsynth::control::uniformity_witness;
use ccsynth::instances;
use ccsynth::synthesis::{is_controllability_family, PairSetFamily};

fn main() -> ccsynth::Result<()> {
    let (g, r) = instances::nonuniform();
    let e = PairSetFamily::from_names(
        &g,
        &r,
        &[
            &[("x0", "z0")],
            &[("x1", "z1"), ("x2", "z1")],
            &[("x1'", "z1'"), ("x2'", "z1'")],
            &[("x2", "z2")],
        ],
    )?;
    println!(
        "controllability family: {}",
        is_controllability_family(&e, &g, &r)?
    );
    match uniformity_witness(&e.union_relation(&g, &r), &g, &r)? {
        None => println!("union is uniform"),
        Some(w) => println!(
            "not uniform: ({}, {}) and ({}, {}) after a common string, {} -{}-> {} unmatched from {}",
            w.x1, w.z1, w.x2, w.z2, w.x2, w.event, w.x2_next, w.z2
        ),
    }
    Ok(())
}
