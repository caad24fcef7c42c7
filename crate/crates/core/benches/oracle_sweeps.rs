use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tdd::bench::{hwb, hwb_sweep};
use tdd::par::Exec;
use tdd::vtree::{balanced_vtree, VarOrder};

fn profile(c: &mut Criterion) {
    let mut g = c.benchmark_group("subfunction_profile");
    g.sample_size(10);
    for n in [12, 16] {
        let f = hwb(n).unwrap();
        let vt = balanced_vtree(&VarOrder::new(f.vars().to_vec()).unwrap());
        for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| f.subfunction_profile(&vt, true, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("hwb_sweep");
    g.sample_size(10);
    let ns: Vec<usize> = (6..=14).collect();
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        g.bench_function(name, |b| b.iter(|| hwb_sweep(&ns, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, profile, sweep);
criterion_main!(benches);
