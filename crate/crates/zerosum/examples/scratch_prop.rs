use std::time::Instant;
use zerosum::relax::{instances, proposition_dreal_check, AdmissibilityThresholds};

fn main() {
    let th = AdmissibilityThresholds::default();
    for (name, inst) in instances::curated_battery(10) {
        let t0 = Instant::now();
        match proposition_dreal_check(&inst, &th, 2000) {
            Ok(v) => println!(
                "{name}: flagged={} moves={} converged={} interior={:?} ({} ms)",
                v.flagged,
                v.minimize_moves,
                v.minimize_converged,
                v.interior.map(|b| (b.point, b.r_squared)),
                t0.elapsed().as_millis()
            ),
            Err(e) => println!("{name}: ERROR {e}"),
        }
    }
}
