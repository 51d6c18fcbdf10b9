//! Value-function samples as CSV, for plotting only.

use std::collections::BTreeSet;

use paraflow::{ParametricSolution, Rational};

/// Breakpoints plus `grid` evenly spaced points over `[0, Λ]` (endpoints
/// included once `grid ≥ 2`), sorted and without duplicates.
pub fn sample_points(sol: &ParametricSolution, grid: usize) -> Vec<Rational> {
    let mut points: BTreeSet<Rational> = sol.breakpoints.iter().cloned().collect();
    let lambda_max = sol.lambda_max();
    match grid {
        0 => {}
        1 => {
            points.insert(Rational::zero());
        }
        _ => {
            let steps = Rational::from(grid as i64 - 1);
            for i in 0..grid {
                points.insert(lambda_max * &Rational::from(i as i64) / &steps);
            }
        }
    }
    points.into_iter().collect()
}

pub fn value_csv(sol: &ParametricSolution, grid: usize) -> String {
    let mut out = String::from("lambda,value\n");
    for lambda in sample_points(sol, grid) {
        let value = sol.evaluate(&lambda).expect("sample points lie in [0, Λ]");
        out.push_str(&format!("{},{}\n", decimal(&lambda), decimal(&value)));
    }
    out
}

/// Decimal with at most 12 significant digits, trailing zeros removed.
pub fn decimal(x: &Rational) -> String {
    let v = x.to_f64();
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let places = (11 - magnitude).max(0) as usize;
    let mut s = format!("{v:.places$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}
