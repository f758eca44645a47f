//! Every solver on seeded instances with a known witness: the instance must be
//! reported feasible, and the answer must reach `Y` and have its class.

use num_complex::Complex64;
use targetkit::verify::{generate_instance, random_spec, verify_property, verify_targeting};
use targetkit::{check, solve, PropertyClass, TolerancePolicy};

const CASES: u64 = 200;

fn classes() -> Vec<PropertyClass> {
    let mut out: Vec<PropertyClass> = PropertyClass::ALL
        .iter()
        .copied()
        .filter(|p| !matches!(p, PropertyClass::NormalTwoPoint { .. }))
        .collect();
    out.push(PropertyClass::two_point(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap());
    out.push(PropertyClass::two_point(Complex64::new(2.0, 0.0), Complex64::new(-0.5, 0.0)).unwrap());
    out.push(PropertyClass::two_point(Complex64::new(0.0, 1.0), Complex64::new(1.5, -1.0)).unwrap());
    out
}

#[test]
fn solvers_recover_generated_instances() {
    let tol = TolerancePolicy::default();
    let mut failures = Vec::new();
    for property in classes() {
        for seed in 0..CASES {
            let spec = random_spec(property, seed, 8);
            let inst = generate_instance(&spec).unwrap();
            let report = check(property, &inst.x, &inst.y, &tol).unwrap();
            if !report.is_feasible() {
                failures.push(format!("{property} {spec:?}: infeasible {:?}", report.first_failure()));
                continue;
            }
            match solve(property, &inst.x, &inst.y, &tol) {
                Ok(s) => {
                    let residual = verify_targeting(&s.a, &inst.x, &inst.y).unwrap();
                    let membership = verify_property(&s.a, property, &tol);
                    if residual > 1e-9 || !membership.passed {
                        failures.push(format!("{property} {spec:?}: residual {residual:e}, {membership:?}"));
                    }
                    if inst.x.is_real() && inst.y.is_real() && property.is_real() && s.a.max_imag() > 0.0 {
                        failures.push(format!("{property} {spec:?}: complex output for real input"));
                    }
                }
                Err(e) => failures.push(format!("{property} {spec:?}: {e}")),
            }
        }
    }
    assert!(failures.is_empty(), "{} failures:\n{}", failures.len(), failures.join("\n"));
}
