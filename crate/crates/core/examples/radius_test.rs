use num_complex::Complex64 as C64;
use wdvv::hurwitz::BranchProfile;
use wdvv::prepotential::{self, FlatChart};
use wdvv::special::Modulus;
use wdvv::util::cpow;
use wdvv::{c64, deriv, EvalConfig, I};

fn a3_printed(coords: &[C64], cfg: &EvalConfig) -> wdvv::Result<C64> {
    let (u, tau, x1, x2, x3) = (coords[0], coords[1], coords[2], coords[3], coords[4]);
    let md = Modulus::new(tau)?;
    let g2 = md.eisenstein(2, cfg)?;
    let g4 = md.eisenstein(4, cfg)?;
    let g6 = md.eisenstein(6, cfg)?;
    Ok(u * u * tau / (4.0 * I * std::f64::consts::PI)
        + u * (4.0 * x1 * x3 + 2.0 * x2 * x2)
        + 8.0 / 3.0 * cpow(x3, 3) / x1
        - 8.0 * x2 * x2 * x3 * x3 / (x1 * x1)
        + 4.0 * cpow(x2, 4) * x3 / cpow(x1, 3)
        - 2.0 / 3.0 * cpow(x2, 6) / cpow(x1, 4)
        + (8.0 * x1 * x1 * x3 * x3 + 8.0 * x1 * x2 * x2 * x3 + 2.0 * cpow(x2, 4)) * g2
        + (4.0 * cpow(x1, 5) * x3 - 10.0 * cpow(x1, 4) * x2 * x2) * g4
        + 5.0 / 3.0 * cpow(x1, 8) * g6)
}

fn main() {
    let mut c = EvalConfig::default();
    c.contour_radius_scale = 0.12;
    c.contour_points = 64;
    let coords = vec![
        c64(0.52, 0.11), c64(0.10, 1.08),
        c64(1.04, 0.26), c64(0.36, -0.22), c64(-0.18, 0.21),
    ];
    let printed = |t: &[C64]| a3_printed(t, &c);
    let analysis = prepotential::wdvv_analysis(&printed, &coords, 0, &c).unwrap();
    println!("printed A3 wdvv residual: {:.3e}", analysis.max_residual());
    // compare tensors: my f_phi_an(3) vs printed
    let mine = prepotential::f_phi_an_chart(3, &c);
    let t1 = deriv::third_tensor(&mine, &coords, &c).unwrap();
    let t2 = deriv::third_tensor(&printed, &coords, &c).unwrap();
    println!("tensor diff an(3) vs printed: {:.3e} (scale {:.3e})", t1.max_diff(&t2), t2.max_norm());
    // and values at a few points
    for dx in [c64(0.0,0.0), c64(0.21,-0.13), c64(-0.17,0.23)] {
        let mut cc = coords.clone();
        cc[2] += dx; cc[3] -= 0.7*dx; cc[4] += 0.3*dx;
        let a = mine(&cc).unwrap();
        let b = printed(&cc).unwrap();
        println!("value diff: {:.3e}", (a-b).norm());
    }
    // general f_phi vs printed A3
    let ch = FlatChart::new(BranchProfile::new(vec![3]).unwrap());
    let gen = prepotential::f_phi_chart(&ch, &c);
    let t3 = deriv::third_tensor(&gen, &coords, &c).unwrap();
    println!("tensor diff general vs printed: {:.3e}", t3.max_diff(&t2));
}
