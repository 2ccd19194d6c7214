// Scratch probe: which polymer temperature couples to a quadratic-type rule,
// and where does the steep quadratic rule survive at all?

use kpzlat::noise::{derive_seed, LawNoise, NoiseLaw};
use kpzlat::polymer::grow_polymer;
use kpzlat::surface::{grow, DerivSpec, DriftMode, GrowBounds, GrowthRule};

fn main() {
    let law = NoiseLaw::rademacher();
    let n = 64u64;
    let t = 64i64;
    let rule = GrowthRule::from_expr(
        "half-quad",
        "(u+v)/2 + 0.5*(u-v)^2",
        DerivSpec::Analytic { beta: 1.0, d4: 0.0 },
        Some(f64::INFINITY),
    )
    .unwrap();
    let bounds = GrowBounds::new(0, t).unwrap();
    let reps = 400u64;

    for temp in [1.0f64, 4.0, 0.25] {
        let mut gap_sum = 0.0;
        let mut gap2_sum = 0.0;
        let mut diff_mismatch2 = 0.0;
        let mut diff_scale2 = 0.0;
        let mut blowups = 0u64;
        for r in 0..reps {
            let noise = LawNoise::new(law.clone(), derive_seed(42, r));
            let f = match grow(&rule, &law, &noise, n, bounds, DriftMode::None) {
                Ok(f) => f,
                Err(_) => {
                    blowups += 1;
                    continue;
                }
            };
            let pf = grow_polymer(&law, &noise, temp, n, bounds).unwrap();
            let theta = temp * (n as f64).powf(-0.25);
            let log_m = law.mgf(theta).unwrap().ln();
            let praw = pf.fpoly(0, t).unwrap() + t as f64 * log_m / temp;
            let gap = f.height(0, t).unwrap() - praw;
            gap_sum += gap;
            gap2_sum += gap * gap;
            let df = f.height(2, t).unwrap() - f.height(0, t).unwrap();
            let dp = pf.fpoly(2, t).unwrap() - pf.fpoly(0, t).unwrap();
            diff_mismatch2 += (df - dp) * (df - dp);
            diff_scale2 += df * df;
        }
        let m = gap_sum / reps as f64;
        let v: f64 = gap2_sum / reps as f64 - m * m;
        println!(
            "temp {temp}: E[f - fpoly_raw](0,{t}) = {m:.4} (sd {:.4}), diff mismatch rms/scale = {:.4}, blowups {blowups}",
            v.sqrt(),
            (diff_mismatch2 / diff_scale2).sqrt()
        );
    }

    // survival of the steep quadratic rule per N on [-N, N] x [0, N]
    for nn in [16u64, 64, 256] {
        let rule = GrowthRule::quadratic();
        let b = GrowBounds::new(nn as i64, nn as i64).unwrap();
        let mut survive = 0;
        let trials = 40;
        for r in 0..trials {
            let noise = LawNoise::new(law.clone(), derive_seed(7, r));
            if grow(&rule, &law, &noise, nn, b, DriftMode::None).is_ok() {
                survive += 1;
            }
        }
        println!("steep quadratic at N={nn}: {survive}/{trials} replicas finite");
    }
}
