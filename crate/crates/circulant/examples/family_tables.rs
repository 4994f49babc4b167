//! Prints every derived quantity for the two built-in families: connection,
//! curvature, Ricci and scalar curvature, the structure tensor with its Lee
//! form, and all property constraint sets.
//!
//! ```sh
//! cargo run --example family_tables
//! ```

use circulant::cli::{Analysis, ConstraintSetName, InputDoc};
use circulant::geometry::{basis_vector, sectional};
use circulant::liealg::BuiltinFamily;

fn main() {
    for id in [BuiltinFamily::G45, BuiltinFamily::G46] {
        let model = InputDoc::for_family(id).build().expect("builtin builds");
        let analysis = Analysis::run(&model).expect("pipeline runs");
        println!("===== {id} =====");

        println!("connection (nonzero coefficients):");
        for i in 1..=4 {
            for j in 1..=4 {
                for k in 1..=4 {
                    let c = analysis.connection.coefficient(i, j, k);
                    if !c.is_zero() {
                        println!("  Gamma^{k}_{i}{j} = {c}");
                    }
                }
            }
        }

        println!("curvature (independent nonzero components):");
        for i in 1..=4 {
            for j in (i + 1)..=4 {
                let v = analysis.curvature.component(i, j, i, j);
                if !v.is_zero() {
                    println!("  R_{i}{j}{i}{j} = {v}");
                }
            }
        }

        println!("ricci diagonal:");
        for (i, row) in analysis.ricci.iter().enumerate() {
            println!("  rho_{0}{0} = {1}", i + 1, row[i]);
        }
        println!("scalar curvature: {}", analysis.tau);

        println!("structure tensor (nonzero components):");
        for i in 1..=4 {
            for j in 1..=4 {
                for k in 1..=4 {
                    let v = analysis.f.component(i, j, k);
                    if !v.is_zero() {
                        println!("  F_{i}{j}{k} = {v}");
                    }
                }
            }
        }
        let theta: Vec<String> = (1..=4)
            .map(|k| analysis.theta.component(k).to_string())
            .collect();
        println!("lee form: ({})", theta.join(", "));

        println!("basic-plane sectional curvatures:");
        for i in 1..=4 {
            for j in (i + 1)..=4 {
                let k = sectional(
                    &analysis.curvature,
                    &analysis.metric,
                    &basis_vector(i, 4),
                    &basis_vector(j, 4),
                )
                .expect("basic planes are nondegenerate here");
                println!("  k({i},{j}) = {k}");
            }
        }

        println!("constraint sets:");
        for name in ConstraintSetName::ALL {
            if let Some(set) = analysis.set(name) {
                println!("  {name}: {set}");
            }
        }
        println!();
    }
}
