//! Running the command-line front end in-process and reading its records
//! back without losing exactness.

use kendall_order::cli::{run, OutputRecord};

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = [
        "kendall-order",
        "exact",
        "--which",
        "margin",
        "--d",
        "5",
        "--K",
        "1,2,3,5",
    ];
    let code = run(argv, &mut out, &mut err);
    let text = String::from_utf8(out).expect("utf-8");
    println!("exit code {code}\n{text}");

    let rec = OutputRecord::from_json(&text).expect("record parses");
    let bracket = rec.get("bracket").and_then(|v| v.as_rational()).expect("bracket");
    println!("bracket read back as an exact rational: {bracket}");
    assert_eq!(
        OutputRecord::from_json(&rec.to_json().expect("json")).expect("parse"),
        rec
    );
}
