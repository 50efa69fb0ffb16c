use criterion::{black_box, criterion_group, criterion_main, Criterion};

use jacsplit::algebra::{self, SamplingPlan};
use jacsplit::covers::{self, DEFAULT_SEARCH_BUDGET};
use jacsplit::report::build_report;
use jacsplit::{chars, lattice, Group};

fn group_ops(c: &mut Criterion) {
    let g = Group::new(3).unwrap();
    let elems: Vec<_> = g.elements().collect();
    c.bench_function("group_product_all_pairs_n3", |b| {
        b.iter(|| {
            let mut acc = 0u64;
            for &x in &elems {
                for &y in &elems {
                    acc = acc.wrapping_add(g.element_index(x * y));
                }
            }
            acc
        })
    });
    c.bench_function("conjugacy_classes_n3", |b| {
        b.iter(|| g.conjugacy_classes().len())
    });
    c.bench_function("character_table_n2", |b| {
        let g2 = Group::new(2).unwrap();
        b.iter(|| chars::character_table(&g2).values.len())
    });
}

fn algebra_ops(c: &mut Criterion) {
    let g = Group::new(3).unwrap();
    let entries = lattice::enumerate_lattice(&g);
    let eps = algebra::epsilon_for(&g, &entries[0].l_canonical).unwrap();
    let phi = algebra::phi_for(&g, &entries[0].l_canonical);
    c.bench_function("phi_times_epsilon_n3", |b| {
        b.iter(|| phi.mul(black_box(&eps)).support_size())
    });

    let irreps = algebra::rational_irreps(&g);
    let e = algebra::central_idempotent(&g, irreps.last().unwrap());
    c.bench_function("idempotent_square_n3", |b| {
        b.iter(|| e.mul(black_box(&e)).support_size())
    });

    c.bench_function("hecke_basis_n3", |b| {
        b.iter(|| algebra::hecke_basis(&g, &g.subgroup_b()).q.len())
    });
    c.bench_function("idempotent_partition_n2", |b| {
        let g2 = Group::new(2).unwrap();
        b.iter(|| algebra::verify_idempotent_partition(&g2, SamplingPlan::Full).is_ok())
    });
}

fn lattice_and_covers(c: &mut Criterion) {
    c.bench_function("lattice_enumeration_n4", |b| {
        let g = Group::new(4).unwrap();
        b.iter(|| lattice::enumerate_lattice(&g).len())
    });

    let g = Group::new(3).unwrap();
    c.bench_function("gv_search_n3_t6", |b| {
        b.iter(|| {
            covers::find_generating_vector(&g, 6, 0, DEFAULT_SEARCH_BUDGET)
                .unwrap()
                .elements
                .len()
        })
    });

    let gv = covers::find_generating_vector(&g, 6, 0, DEFAULT_SEARCH_BUDGET).unwrap();
    let b_sub = g.subgroup_b();
    c.bench_function("quotient_genus_xb_n3", |b| {
        b.iter(|| covers::quotient_genus(&g, &b_sub, black_box(&gv)).unwrap())
    });
}

fn reports(c: &mut Criterion) {
    let mut grp = c.benchmark_group("report");
    grp.sample_size(10);
    grp.bench_function("build_report_n2_t4", |b| {
        b.iter(|| build_report(2, 4, 0, DEFAULT_SEARCH_BUDGET).unwrap().checks.len())
    });
    grp.finish();
}

criterion_group!(benches, group_ops, algebra_ops, lattice_and_covers, reports);
criterion_main!(benches);
