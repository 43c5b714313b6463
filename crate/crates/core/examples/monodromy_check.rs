//! Computes the half-twist monodromy matrices of a configuration, the
//! Hermitian form they preserve, and checks the braid relations.
//!
//! Usage: `cargo run --release --example monodromy_check -- [n] [digits]`

use std::time::Instant;

use attractor_lab::curve::PointConfiguration;
use attractor_lab::monodromy::{check_invariance, continue_schwarz, hermitian_form, BraidWord};
use attractor_lab::mp::Precision;

fn main() -> attractor_lab::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = args.first().copied().unwrap_or(3);
    let p = Precision::digits(args.get(1).copied().unwrap_or(40))?;
    // Points on a gentle zigzag between 0 and 1.
    let m = 2 * n - 3;
    let free: Vec<(f64, f64)> = (1..=m)
        .map(|k| {
            let x = k as f64 / (m + 1) as f64;
            (x, if k % 2 == 0 { 0.08 } else { -0.06 })
        })
        .collect();
    let cfg = PointConfiguration::from_f64(n, p.bits(), &free)?;

    let t = Instant::now();
    let form = hermitian_form(&cfg, p)?;
    println!("signature {:?}, hermitian defect {:.2e} ({:?})", form.signature, form.hermitian_defect, t.elapsed());
    let gens = 2 * n as usize - 2;
    let mut mats = Vec::new();
    for j in 1..=gens {
        let t = Instant::now();
        let mj = continue_schwarz(&cfg, &BraidWord::generator(j), p)?;
        println!("letter {j}: invariance defect {:.2e} ({:?})", check_invariance(&mj.matrix, &form.matrix), t.elapsed());
        mats.push(mj.matrix);
    }
    for j in 1..gens {
        let (a, b) = (&mats[j - 1], &mats[j]);
        let d = a.matmul(b).matmul(a).max_abs_diff(&b.matmul(a).matmul(b));
        println!("braid relation {j},{}: defect {d:.2e}", j + 1);
    }
    for j in 1..=gens {
        for k in j + 2..=gens {
            let d = mats[j - 1].matmul(&mats[k - 1]).max_abs_diff(&mats[k - 1].matmul(&mats[j - 1]));
            println!("far commutation {j},{k}: defect {d:.2e}");
        }
    }
    Ok(())
}
