//! Restricted Lie-Rinehart structures: the derivation algebra of truncated
//! polynomials, the anchor search in characteristic 2, and the full/weak
//! split of a deformation over the dual numbers.

use restricted_lie::catalog;
use restricted_lie::rinehart::{
    anchor_search, derivation_structure, verify_lie_rinehart, verify_lr_deformation,
};
use restricted_lie::sweep::Sweep;

fn main() -> restricted_lie::Result<()> {
    let sweep = Sweep::default();
    let a = catalog::truncated_polynomials(3)?;
    let (der, s) = derivation_structure(&a)?;
    println!("Der(F[x]/(x^3-1)) has dimension {}", der.lie().dim());
    println!(
        "(A, Der A) is restricted Lie-Rinehart: {}",
        verify_lie_rinehart(&s, &sweep).passed()
    );

    let s2 = catalog::char2_rinehart()?;
    let search = anchor_search(s2.algebra(), s2.lie(), s2.action(), &sweep)?;
    println!(
        "char 2: {} anchors tried, {} survive",
        search.candidates,
        search.survivors.len()
    );

    let d = catalog::heisenberg_deformation(5)?;
    for gamma in 0..5 {
        let s = catalog::heisenberg_rinehart(5, gamma)?;
        let r = verify_lr_deformation(&s, &d, &[], &sweep)?;
        println!("gamma={gamma}: deformation is {:?}", r.class);
    }
    Ok(())
}
