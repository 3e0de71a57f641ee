//! The five preorders on a few random pairs, with the implications between
//! them visible row by row.

use ccsynth::relation::{holds, Preorder};
use ccsynth::testkit::{random_instance, InstanceSpec};

fn main() -> ccsynth::Result<()> {
    print!("seed");
    for p in Preorder::ALL {
        print!("\t{}", p.name());
    }
    println!();
    for seed in 0..12 {
        let spec = InstanceSpec {
            seed,
            density: 0.35,
            ..InstanceSpec::default()
        };
        let (g, r) = random_instance(&spec);
        print!("{seed}");
        for p in Preorder::ALL {
            print!("\t{}", holds(&g, &r, &p.kind(g.alphabet()))?.holds);
        }
        println!();
    }
    Ok(())
}
