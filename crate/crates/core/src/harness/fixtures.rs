use rand::SeedableRng;
use serde_json::{json, Value};

use super::suites::{random_satake, wedge2_sides};
use super::HarnessError;
use crate::dual_lfactors::intertwiner_a;
use crate::exact_rings::{HermMat2, QuadAlgebra};
use crate::herm_modform::enumerate_reps;

pub const FIXTURES: &[&str] = &["reps-Qi-T=I-bound3", "euler-wedge2-sample", "A-matrix"];

/// Canonical JSON for a named fixture. `seed` only affects `euler-wedge2-sample`.
pub fn fixture(name: &str, seed: u64) -> Result<Value, HarnessError> {
    match name {
        "reps-Qi-T=I-bound3" => {
            let reps = enumerate_reps(&HermMat2::identity(QuadAlgebra::gaussian()), 3)?;
            Ok(json!({
                "fixture": name, "algebra": "field:1", "T": "I", "bound": 3, "count": reps.len(),
                "reps": reps.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            }))
        }
        "euler-wedge2-sample" => {
            let a = intertwiner_a()?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let rows = (0..25)
                .map(|_| {
                    let s = random_satake(&mut rng);
                    let (lhs, rhs) = wedge2_sides(&s, &a)?;
                    Ok(json!({
                        "params": [s.a0.to_string(), s.a1.to_string(), s.a2.to_string()],
                        "wedge2": lhs.to_json(), "spin_times_zeta": rhs.to_json(),
                    }))
                })
                .collect::<Result<Vec<_>, HarnessError>>()?;
            Ok(json!({ "fixture": name, "seed": seed, "samples": rows }))
        }
        "A-matrix" => {
            let a = intertwiner_a()?;
            let rows: Vec<Vec<String>> =
                a.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
            Ok(json!({ "fixture": name, "basis": "e_i^e_j, i<j, lexicographic", "rows": rows, "trace": a.trace().to_string() }))
        }
        _ => Err(HarnessError::UnknownFixture(name.to_string())),
    }
}
