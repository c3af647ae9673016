//! Certificates: no formula below a bound separates a witness set.

use modal_succinctness::gallery::{symmetry_witnesses, transfer_witnesses};
use modal_succinctness::report::lob_certificate;
use modal_succinctness::synth::{certify_bound, Certificate, CertifyOptions};
use modal_succinctness::MeasureKind;

fn main() {
    let w = transfer_witnesses(1, 2).unwrap();
    let cert = certify_bound(&w, &CertifyOptions::new(MeasureKind::Length, 6));
    print!("{}", cert.primary_text());
    let back: Certificate = cert.to_string().parse().unwrap();
    assert_eq!(back.primary_text(), cert.primary_text());

    // claiming too much yields a refuting formula
    let over = certify_bound(
        &symmetry_witnesses(),
        &CertifyOptions::new(MeasureKind::Length, 6),
    );
    println!("symmetry at 6: {:?}", over.verdict);

    let (d, lob) = lob_certificate(8).unwrap().unwrap();
    println!(
        "Loeb: stable truncation depth {d}, verdict {:?}, notes {:?}",
        lob.verdict, lob.notes
    );
}
