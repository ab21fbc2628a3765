use mqxl_core::bench::bench_front_point;
fn main() {
    for n in 10..=16 {
        match bench_front_point(n, 42, 600.0) {
            Ok(p) => println!("n={} k={} D={} secs={:.3} pred=2^{:.1}", p.n, p.k, p.degree, p.seconds, p.log2_predicted_ops),
            Err(e) => println!("n={n}: ERR {e}"),
        }
    }
}
