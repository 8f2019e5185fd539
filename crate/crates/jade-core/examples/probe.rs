use jade_core::bench::*;
use jade_core::jade::{self, JadeConfig};
use jade_core::signal::NoiseSpec;
use jade_core::synth;

fn main() {
    for seed in 0..10 {
        let spec = NoiseSpec::new(0.05, seed).unwrap();
        let (s, truth) = synth::am_fm_signal(3000, 0.3, 1.0/35.0, 1.0, 1.0/100.0, &spec).unwrap();
        let mono = JadeConfig { monotonic_segments: true, ..JadeConfig::default() };
        let em = match jade::estimate(&s, &mono) {
            Ok(r) => jade::relative_error(&r.phase.splined, &truth.phase).unwrap(),
            Err(e) => { println!("seed {seed}: mono failed {e}"); continue }
        };
        let report = compare_methods(&s, &truth.phase);
        let j = report.epsilon_of(Method::Jade).unwrap_or(f64::INFINITY);
        let h = report.epsilon_of(Method::Ht).unwrap_or(f64::INFINITY);
        println!("seed {seed}: jade_cross={j:.4} jade_mono={em:.4} ht={h:.4}");
    }
}
