//! Isomorphism classes of restricted structures on the Heisenberg algebra over GF(p).

use restricted_lie::catalog::{classify_heisenberg, theta_name};

fn main() -> restricted_lie::Result<()> {
    for p in [2, 3, 5] {
        let classes = classify_heisenberg(p)?;
        println!("p={p}: {} classes", classes.len());
        for c in classes {
            println!(
                "  {:<7} {} forms",
                theta_name(c.representative),
                c.members.len()
            );
        }
    }
    Ok(())
}
