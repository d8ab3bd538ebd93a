use biplane_core::fixtures;
use biplane_core::{
    assemble_b4c, classify, extract_design, is_perm_equivalent, verify_biplane, AssociationScheme, BinaryMatrix,
    IncidenceStructure, Permutation,
};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn row_dot(c: &mut Criterion) {
    let m = BinaryMatrix::doubled(64).unwrap();
    c.bench_function("row_dot all pairs, v=128", |b| {
        b.iter(|| {
            let mut s = 0;
            for i in 0..m.rows() {
                for j in i + 1..m.rows() {
                    s += m.row_dot(i, j).unwrap();
                }
            }
            black_box(s)
        })
    });
}

fn verify(c: &mut Criterion) {
    let b4c = assemble_b4c();
    c.bench_function("verify_biplane B_4c", |b| b.iter(|| verify_biplane(black_box(&b4c)).unwrap()));
    c.bench_function("extract_design B_4c", |b| b.iter(|| extract_design(black_box(&b4c)).unwrap()));
}

fn classify_and_scheme(c: &mut Criterion) {
    let mut g = c.benchmark_group("doubled");
    for m in [8, 32, 64] {
        let s = IncidenceStructure::new(BinaryMatrix::doubled(m).unwrap());
        g.bench_with_input(BenchmarkId::new("classify", 2 * m), &s, |b, s| b.iter(|| classify(s).unwrap()));
    }
    g.finish();

    let table = &fixtures::order9_cores()[0].1;
    let classes = classify(&IncidenceStructure::new(table.clone())).unwrap();
    c.bench_function("scheme axioms, 16 points", |b| {
        b.iter(|| AssociationScheme::from_classification(black_box(&classes)).is_err())
    });
    let r = fixtures::relation_r_prime();
    c.bench_function("scheme axioms, R'", |b| b.iter(|| AssociationScheme::from_relation_matrix(&r).unwrap()));
}

fn equivalence(c: &mut Criterion) {
    let b4c = assemble_b4c();
    let p = Permutation::new((0..16).map(|i| (i * 5 + 3) % 16).collect()).unwrap();
    let q = Permutation::new((0..16).map(|i| (i * 7 + 1) % 16).collect()).unwrap();
    let moved = b4c.permute(&p, &q).unwrap();
    c.bench_function("is_perm_equivalent B_4c", |b| b.iter(|| is_perm_equivalent(&moved, &b4c).unwrap()));
}

criterion_group!(benches, row_dot, verify, classify_and_scheme, equivalence);
criterion_main!(benches);
