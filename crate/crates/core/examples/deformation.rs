//! A first-order deformation of the Heisenberg algebra: verification, its
//! infinitesimal class, obstructions, extension to order 2, and a trivial
//! deformation generated by a Nijenhuis operator.

use restricted_lie::algebra::RestrictedModule;
use restricted_lie::catalog;
use restricted_lie::cohomology_restricted::h2_star;
use restricted_lie::deformation::{
    extend_order, infinitesimal_cocycle_check, nijenhuis_deformation, obstruction,
    verify_deformation, NijenhuisOperator,
};
use restricted_lie::gf::FpMatrix;
use restricted_lie::sweep::Sweep;

fn main() -> restricted_lie::Result<()> {
    let sweep = Sweep::default();
    let d = catalog::heisenberg_deformation(5)?;
    let report = verify_deformation(&d, &sweep);
    println!("order-1 deformation passes: {}", report.passed());
    let check = infinitesimal_cocycle_check(&d, &sweep)?;
    println!(
        "infinitesimal is a cocycle: {}, trivial: {}",
        check.cocycle,
        check.is_trivial()
    );
    println!(
        "obstruction vanishes: {}",
        obstruction(&d, &sweep)?.is_zero()
    );

    let module = RestrictedModule::adjoint(d.base());
    let cocycles = h2_star(&module, &sweep)?.cocycles(&module);
    let extendable = cocycles
        .iter()
        .map(|c| extend_order(&d, &c.phi, &c.omega, &sweep))
        .collect::<Result<Vec<_>, _>>()?;
    println!(
        "{} of {} cocycles extend the deformation to order 2",
        extendable.iter().filter(|&&b| b).count(),
        cocycles.len()
    );
    let next = &cocycles[0];
    let d2 = d.extended(next.phi.clone(), next.omega.clone())?;
    println!(
        "extended deformation of order {} passes: {}",
        d2.order(),
        verify_deformation(&d2, &sweep).passed()
    );

    let sl2 = catalog::sl2(5)?;
    let op = NijenhuisOperator::new(&sl2, FpMatrix::identity(sl2.field(), 3), &sweep)?;
    let nd = nijenhuis_deformation(&sl2, &op, &sweep)?;
    let trivial = infinitesimal_cocycle_check(&nd.deformation, &sweep)?.is_trivial();
    println!("Nijenhuis deformation of sl2 is trivial: {trivial}");
    Ok(())
}
