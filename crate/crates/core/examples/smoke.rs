use cascade_qed::model::{build_liouvillian_spec, ModelParams, Variant};
use cascade_qed::observables::photon_statistics;
use cascade_qed::solvers::steady_state;

fn main() {
    let mut p = ModelParams::new(Variant::CascadedTc);
    p.xi = 1.0;
    p.g = 1.25;
    p.kappa = 5.0;
    p.gamma = 0.375;
    p.n_max = 10;
    let spec = build_liouvillian_spec(&p).unwrap();
    let t0 = std::time::Instant::now();
    let sol = steady_state(&spec).unwrap();
    let dt = t0.elapsed();
    let lay = p.layout().unwrap();
    let stats = photon_statistics(&lay, &sol.rho).unwrap();
    println!("solve time: {dt:?}");
    println!("residual:   {:.3e}", sol.residual);
    println!("gap_ratio:  {:.3e}", sol.gap_ratio);
    println!("min_eig:    {:.3e}", sol.min_eigenvalue);
    println!("n_a:        {:.6}", stats.n_a);
    println!("g2:         {:.6}", stats.g2.unwrap());
    println!("g3:         {:.6}", stats.g3.unwrap());
    println!("P2:         {:.6}", stats.p_n[2]);
    println!("F1:         {:.6}", stats.f_k[1]);
    println!("F2:         {:.8}", stats.f_k[2]);
    println!("R21:        {:.6}", stats.r21.unwrap());
}
