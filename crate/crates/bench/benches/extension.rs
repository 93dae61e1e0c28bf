use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ultralip::extension::{extend_finite_line, extend_finite_plane_ladder};
use ultralip::generate::random_finite_function;
use ultralip::sampling::{self, random_disjoint_cells, sample_points, Window};
use ultralip::skeleton::build_skeleton;
use ultralip::FieldDescriptor;

const W: Window = Window::DEFAULT;

fn finite_line(c: &mut Criterion) {
    let mut g = c.benchmark_group("finite-line");
    for k in [4, 12, 32] {
        let mut r = sampling::rng(k as u64);
        let f = random_finite_function(&mut r, FieldDescriptor::TAdic, 1, k, W);
        let pts = sample_points(&mut r, FieldDescriptor::TAdic, 1, &[], 64, W);
        g.bench_with_input(BenchmarkId::new("build+eval64", k), &f, |b, f| {
            b.iter(|| {
                let big_f = extend_finite_line(f).unwrap();
                pts.iter().map(|x| big_f.eval(x)).count()
            })
        });
    }
    g.finish();
}

fn plane_ladder(c: &mut Criterion) {
    let mut g = c.benchmark_group("plane-ladder");
    for k in [4, 10] {
        let mut r = sampling::rng(100 + k as u64);
        let f = random_finite_function(&mut r, FieldDescriptor::TAdic, 2, k, W);
        let pts = sample_points(&mut r, FieldDescriptor::TAdic, 2, &[], 64, W);
        g.bench_with_input(BenchmarkId::new("build+eval64", k), &f, |b, f| {
            b.iter(|| {
                let big_f = extend_finite_plane_ladder(f).unwrap();
                pts.iter().map(|x| big_f.eval(x)).count()
            })
        });
    }
    g.finish();
}

fn skeleton(c: &mut Criterion) {
    let mut g = c.benchmark_group("skeleton");
    for k in [2, 6, 12] {
        let mut r = sampling::rng(200 + k as u64);
        let cells = random_disjoint_cells(&mut r, FieldDescriptor::TAdic, k, W);
        g.bench_with_input(BenchmarkId::from_parameter(k), &cells, |b, cells| b.iter(|| build_skeleton(cells).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, finite_line, plane_ladder, skeleton);
criterion_main!(benches);
