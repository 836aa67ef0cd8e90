//! Every example in `examples/` runs to completion.

mod code_space_operators {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/code_space_operators.rs"
    ));
}

#[test]
fn code_space_operators_runs() {
    code_space_operators::run_example().expect("code_space_operators should run");
}

mod filter_banks {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/filter_banks.rs"
    ));
}

#[test]
fn filter_banks_runs() {
    filter_banks::run_example().expect("filter_banks should run");
}

mod loop_group {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/loop_group.rs"
    ));
}

#[test]
fn loop_group_runs() {
    loop_group::run_example().expect("loop_group should run");
}

mod circle_cqf {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/circle_cqf.rs"
    ));
}

#[test]
fn circle_cqf_runs() {
    circle_cqf::run_example().expect("circle_cqf should run");
}

mod blaschke_products {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/blaschke_products.rs"
    ));
}

#[test]
fn blaschke_products_runs() {
    blaschke_products::run_example().expect("blaschke_products should run");
}

mod cascade_scaling {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/cascade_scaling.rs"
    ));
}

#[test]
fn cascade_scaling_runs() {
    cascade_scaling::run_example().expect("cascade_scaling should run");
}

mod perfect_reconstruction {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/perfect_reconstruction.rs"
    ));
}

#[test]
fn perfect_reconstruction_runs() {
    perfect_reconstruction::run_example().expect("perfect_reconstruction should run");
}

mod solenoid_moments {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/solenoid_moments.rs"
    ));
}

#[test]
fn solenoid_moments_runs() {
    solenoid_moments::run_example().expect("solenoid_moments should run");
}

mod rkhs_kernels {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/rkhs_kernels.rs"
    ));
}

#[test]
fn rkhs_kernels_runs() {
    rkhs_kernels::run_example().expect("rkhs_kernels should run");
}

mod logistic_arcsine {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/logistic_arcsine.rs"
    ));
}

#[test]
fn logistic_arcsine_runs() {
    logistic_arcsine::run_example().expect("logistic_arcsine should run");
}

mod fractal_chaos_game {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/fractal_chaos_game.rs"
    ));
}

#[test]
fn fractal_chaos_game_runs() {
    fractal_chaos_game::run_example().expect("fractal_chaos_game should run");
}

mod cli_walkthrough {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/cli_walkthrough.rs"
    ));
}

#[test]
fn cli_walkthrough_runs() {
    cli_walkthrough::run_example().expect("cli_walkthrough should run");
}
