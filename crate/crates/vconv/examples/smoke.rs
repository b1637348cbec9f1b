use vconv::suites::*;
use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let config = RunConfig::default();
    let name = args.get(1).map(|s| s.as_str()).unwrap_or("mixed-discriminant");
    let t = std::time::Instant::now();
    let report = run_suite(name, &config, 3, None).unwrap();
    println!("=== {} pass={} ({:.1?})", report.suite, report.pass, t.elapsed());
    for e in &report.entries {
        println!("  [{}] {} residual={:.3e} tol={:.1e}", if e.pass {"ok"} else {"FAIL"}, e.name, e.residual, e.tolerance);
    }
    std::io::stdout().flush().unwrap();
}
