//! Second restricted cohomology of the Heisenberg algebra with its three p-maps,
//! and the characteristic 2 complex.

use restricted_lie::algebra::RestrictedModule;
use restricted_lie::catalog::{heisenberg, theta_name};
use restricted_lie::cohomology_ce::ce_cohomology_dim;
use restricted_lie::cohomology_char2::h_n_star2;
use restricted_lie::cohomology_restricted::h2_star;
use restricted_lie::sweep::Sweep;

fn main() -> restricted_lie::Result<()> {
    let sweep = Sweep::default();
    for p in [3, 5] {
        for theta in [[0, 0, 0], [1, 0, 0], [0, 0, 1]] {
            let module = RestrictedModule::adjoint(&heisenberg(p, theta)?);
            let ce = ce_cohomology_dim(&module, 2)?;
            let h = h2_star(&module, &sweep)?;
            println!(
                "p={p} theta={:<3} dim H^2_CE = {ce}, dim H^2_* = {}",
                theta_name(theta),
                h.dim()
            );
        }
    }
    for theta in [[0, 0, 0], [0, 0, 1]] {
        let module = RestrictedModule::adjoint(&heisenberg(2, theta)?);
        let dims: Vec<usize> = (0..=3)
            .map(|n| h_n_star2(&module, n, &sweep).map(|h| h.dim()))
            .collect::<Result<_, _>>()?;
        println!(
            "p=2 theta={:<3} dim H^n_*2 for n = 0..3: {dims:?}",
            theta_name(theta)
        );
    }
    Ok(())
}
