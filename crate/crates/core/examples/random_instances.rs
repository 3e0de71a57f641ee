//! Solvability on random deterministic and nondeterministic instances,
//! comparing the fixpoint with the single relation check where it applies.

use ccsynth::synthesis::{deterministic_fastpath, is_solvable};
use ccsynth::testkit::{random_instance, InstanceSpec};

fn main() -> ccsynth::Result<()> {
    for deterministic in [true, false] {
        let (mut solvable, mut applies, mut agree, mut total) = (0, 0, 0, 0);
        for seed in 0..50 {
            let spec = InstanceSpec {
                seed,
                deterministic,
                density: if deterministic { 0.7 } else { 0.3 },
                ..InstanceSpec::default()
            };
            let (g, r) = random_instance(&spec);
            let s = is_solvable(&g, &r)?;
            solvable += usize::from(s);
            total += 1;
            if let Some(fast) = deterministic_fastpath(&g, &r)? {
                applies += 1;
                agree += usize::from(fast == s);
            }
        }
        println!(
            "deterministic={deterministic}: {solvable}/{total} solvable, shortcut applies to {applies} and agrees on {agree}"
        );
    }
    Ok(())
}
