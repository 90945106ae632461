use criterion::{black_box, criterion_group, criterion_main, Criterion};

use landau_rel::rational::parse_rational;
use landau_rel::spectrum;
use landau_rel::Order;

fn crossings(c: &mut Criterion) {
    let eps = parse_rational("1e-6").unwrap();
    for order in [Order::One, Order::Two] {
        let lines = spectrum::spectral_lines(8, 8, &eps, order);
        c.bench_function(&format!("find_crossings_9x9_order{}", order.as_u8()), |b| {
            b.iter(|| spectrum::find_crossings(black_box(&lines), 0.05, 4.0).unwrap())
        });
    }

    let lines = spectrum::spectral_lines(16, 4, &eps, Order::One);
    let report = spectrum::find_crossings(&lines, 0.05, 2.0).unwrap();
    c.bench_function("crossing_clusters", |b| {
        b.iter(|| spectrum::crossing_clusters(black_box(&report.crossings), 1e-9))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = crossings
}
criterion_main!(benches);
