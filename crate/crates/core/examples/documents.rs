//! JSON documents: parse a Heisenberg algebra with a deformation, rebuild the
//! objects, and write them back.

use restricted_lie::deformation::verify_deformation;
use restricted_lie::document::AlgebraDocument;
use restricted_lie::sweep::Sweep;

const DOCUMENT: &str = r#"{
  "p": 5,
  "dim": 3,
  "basis": ["x", "y", "z"],
  "brackets": [{"i": 0, "j": 1, "coeffs": [0, 0, 1]}],
  "pmap": [[0, 0, 0], [0, 0, 0], [0, 0, 1]],
  "deformation": {
    "order": 1,
    "terms": [{
      "m": [{"i": 0, "j": 1, "coeffs": [1, 0, 0]}],
      "omega": [[0, 0, 0], [0, 0, 1], [0, 0, 0]]
    }]
  }
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = AlgebraDocument::from_json(DOCUMENT)?;
    let alg = doc.restricted_algebra()?;
    let (d, _) = doc
        .truncated_deformation(&alg)
        .expect("document has a deformation")?;
    println!(
        "deformation passes: {}",
        verify_deformation(&d, &Sweep::default()).passed()
    );
    let back = AlgebraDocument::from_algebra(&alg).with_deformation(&d, &[]);
    println!("{}", back.to_json());
    match AlgebraDocument::from_json(r#"{"p": 4, "dim": 1, "pmap": [[0]]}"#) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
