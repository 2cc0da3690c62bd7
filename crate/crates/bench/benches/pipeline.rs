use criterion::{black_box, criterion_group, criterion_main, Criterion};

use parikh_holo::automata::{count_words, is_weakly_unambiguous};
use parikh_holo::fixtures;
use parikh_holo::holonomic::pa_ode;
use parikh_holo::inclusion::decide_inclusion;
use parikh_holo::Limits;

fn counting(c: &mut Criterion) {
    let l3 = fixtures::pa("l3").unwrap();
    let labab = fixtures::pa("labab").unwrap();
    c.bench_function("count_words l3 30", |b| b.iter(|| count_words(black_box(&l3), 30)));
    c.bench_function("count_words labab 30", |b| b.iter(|| count_words(black_box(&labab), 30)));
}

fn ambiguity(c: &mut Criterion) {
    let limits = Limits::default();
    for name in ["intro", "leven"] {
        let a = fixtures::pa(name).unwrap();
        c.bench_function(&format!("weak unambiguity {name}"), |b| {
            b.iter(|| is_weakly_unambiguous(black_box(&a), &limits))
        });
    }
}

fn symbolic(c: &mut Criterion) {
    let astar = fixtures::pa("astar").unwrap();
    let aastar = fixtures::pa("aastar").unwrap();
    let abstar = fixtures::pa("abstar").unwrap();
    let anbn = fixtures::pa("anbn").unwrap();
    c.bench_function("pa_ode abstar", |b| b.iter(|| pa_ode(black_box(&abstar)).unwrap()));
    c.bench_function("include aastar astar", |b| b.iter(|| decide_inclusion(&aastar, &astar, 30).unwrap()));
    c.bench_function("include abstar anbn", |b| b.iter(|| decide_inclusion(&abstar, &anbn, 30).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = counting, ambiguity, symbolic
}
criterion_main!(benches);
