//! All fourteen acceptance criteria, one PASS/FAIL line each.

use lorentz_lab::suite::{run_criterion, SuiteConfig, CRITERIA};

fn main() {
    let cfg = SuiteConfig::default();
    let mut failed = Vec::new();
    let mut total = 0;
    for (n, name, prop) in CRITERIA {
        let r = run_criterion(n, &cfg);
        println!(
            "[{n:02}] {} {name}: {prop} | worst {} (tolerance {}) | {} | {} ms",
            r.verdict.label(),
            r.constant,
            r.tolerance,
            r.detail,
            r.runtime_ms.unwrap_or(0)
        );
        let ms = r.runtime_ms.unwrap_or(0);
        total += ms;
        if n == 1 && ms > 10_000 {
            println!("[01] FAIL rearrangement runtime {ms} ms exceeds 10 s");
            failed.push(name);
        }
        if !r.verdict.ok() {
            failed.push(name);
        }
    }
    println!("total {total} ms (budget 300000)");
    if total > 300_000 {
        failed.push("runtime budget");
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: 14 of 14 criteria pass");
}
