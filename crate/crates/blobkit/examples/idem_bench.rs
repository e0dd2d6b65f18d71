use blobkit::hecke::{build_idempotent, verify_idempotent, IdempotentSpec, Sign};
fn main() {
    let args: Vec<String> = std::env::args().collect();
    let d: usize = args[1].parse().unwrap();
    let n: usize = args[2].parse().unwrap();
    for l in 1..=d {
        for sign in [Sign::Plus, Sign::Minus] {
            let spec = IdempotentSpec { sign, l, n };
            let t0 = std::time::Instant::now();
            let e = build_idempotent(&spec, d);
            let tb = t0.elapsed();
            let t1 = std::time::Instant::now();
            let rep = verify_idempotent(&e, &spec, d);
            let tv = t1.elapsed();
            println!("d={d} n={n} l={l} {sign:?}: build {tb:?} verify {tv:?} pass={}", rep.passes());
        }
    }
}
