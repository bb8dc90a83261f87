use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use goalsel::gen::{random_kb, GeneratorConfig};
use goalsel::postulates::verify;
use goalsel::semantics::{select, SelectOptions};
use goalsel::{all_attacks, build_all, load_spec, StrengthTable};

const CLEANER: &str = include_str!("../../core/fixtures/cleaner.json");

fn fixture(c: &mut Criterion) {
    let kb = load_spec(CLEANER).unwrap();
    let opts = SelectOptions::default();
    c.bench_function("fixture/load", |b| b.iter(|| load_spec(black_box(CLEANER)).unwrap()));
    c.bench_function("fixture/select", |b| b.iter(|| select(black_box(&kb), &opts).unwrap()));
}

fn stages(c: &mut Criterion) {
    // Seeds whose bases the enumeration accepts, so every iteration does full work.
    let opts = SelectOptions::default();
    let kbs: Vec<_> = (0..200u64)
        .map(|s| random_kb(s, &GeneratorConfig::default()))
        .filter(|kb| select(kb, &opts).is_ok())
        .take(32)
        .collect();
    c.bench_function("random/build", |b| {
        b.iter(|| kbs.iter().map(|kb| build_all(kb).unwrap().len()).sum::<usize>())
    });
    c.bench_function("random/attacks", |b| {
        b.iter_batched(
            || kbs.iter().map(|kb| build_all(kb).unwrap()).collect::<Vec<_>>(),
            |sets| {
                for (kb, set) in kbs.iter().zip(&sets) {
                    black_box(all_attacks(set, kb));
                    black_box(StrengthTable::compute(set, kb));
                }
            },
            BatchSize::SmallInput,
        )
    });
    c.bench_function("random/select", |b| {
        b.iter(|| {
            for kb in &kbs {
                black_box(select(kb, &opts).unwrap());
            }
        })
    });
    c.bench_function("random/verify", |b| {
        let sels: Vec<_> = kbs.iter().map(|kb| select(kb, &opts).unwrap()).collect();
        b.iter(|| {
            for (kb, sel) in kbs.iter().zip(&sels) {
                let family: Vec<Vec<usize>> = sel.conflict_free.iter().map(|e| e.members.clone()).collect();
                black_box(verify(&family, &sel.arguments, kb));
            }
        })
    });
}

criterion_group!(benches, fixture, stages);
criterion_main!(benches);
