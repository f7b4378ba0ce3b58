#[path = "../examples/calculus.rs"]
mod calculus;
#[path = "../examples/cli_pipeline.rs"]
mod cli_pipeline;
#[path = "../examples/isotopy.rs"]
mod isotopy;
#[path = "../examples/metric.rs"]
mod metric;
#[path = "../examples/normalize.rs"]
mod normalize;
#[path = "../examples/quotient_lattice.rs"]
mod quotient_lattice;
#[path = "../examples/random_triples.rs"]
mod random_triples;
#[path = "../examples/serialization.rs"]
mod serialization;
#[path = "../examples/sl3_action.rs"]
mod sl3_action;
#[path = "../examples/structural_data.rs"]
mod structural_data;
#[path = "../examples/verify_triple.rs"]
mod verify_triple;

#[test]
fn calculus_runs() {
    calculus::run().unwrap();
}

#[test]
fn cli_pipeline_runs() {
    cli_pipeline::run().unwrap();
}

#[test]
fn isotopy_runs() {
    isotopy::run().unwrap();
}

#[test]
fn metric_runs() {
    metric::run().unwrap();
}

#[test]
fn normalize_runs() {
    normalize::run().unwrap();
}

#[test]
fn quotient_lattice_runs() {
    quotient_lattice::run().unwrap();
}

#[test]
fn random_triples_runs() {
    random_triples::run().unwrap();
}

#[test]
fn serialization_runs() {
    serialization::run().unwrap();
}

#[test]
fn sl3_action_runs() {
    sl3_action::run().unwrap();
}

#[test]
fn structural_data_runs() {
    structural_data::run().unwrap();
}

#[test]
fn verify_triple_runs() {
    verify_triple::run().unwrap();
}
