//! Enumerates the local moves of a random partition and applies the best
//! disjoint admissible set.

use grainflow::deformation::{apply_best_moves, check_admissible, enumerate_moves};
use grainflow::geometry::{random_partition, total_mass, validate};
use grainflow::kernels::WeightOmega;

fn main() {
    let w = WeightOmega::constant_one();
    let j = 10;
    let net = random_partition(3);
    println!(
        "{} grains, {} edges, mass {:.4}",
        net.n_grains(),
        net.edges().len(),
        total_mass(&net, &w)
    );

    let moves = enumerate_moves(&net, j, &w);
    let mut by_kind = std::collections::BTreeMap::new();
    for mv in &moves {
        let ok = check_admissible(&net, mv, j, &w).admissible();
        let e = by_kind.entry(mv.kind.name()).or_insert((0, 0));
        e.0 += 1;
        e.1 += ok as usize;
    }
    for (kind, (n, ok)) in by_kind {
        println!("{kind:<20} {n:>4} candidates, {ok:>4} admissible");
    }

    let (after, est) = apply_best_moves(&net, j, &w);
    println!(
        "applied {} moves, mass drop {:.3e}, largest area change {:.3e} (budget {:.3e})",
        est.moves.len(),
        est.drop,
        est.max_volume_delta,
        est.volume_budget
    );
    assert!(validate(&after).is_empty());
    println!("mass after {:.4}", total_mass(&after, &w));
}
