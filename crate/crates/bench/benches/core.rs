use criterion::{black_box, criterion_group, criterion_main, Criterion};

use ggt_core::cayley::CayleyBall;
use ggt_core::coned::{ConedGraph, SubgroupSpec};
use ggt_core::fpgroup::AmalgamSplitting;
use ggt_core::freesub::SubgroupAutomaton;
use ggt_core::quasi::{defect_estimate, PairSamples, Quasimorphism};
use ggt_core::words::reduced_words_of_length;
use ggt_core::{Budget, Presentation, Word};

fn ball_build(c: &mut Criterion) {
    let p = Presentation::surface(3, false).unwrap();
    c.bench_function("ball N3 radius 5", |b| {
        b.iter(|| CayleyBall::build(&p, black_box(5), &Budget::default()).unwrap())
    });
}

fn normal_form(c: &mut Criterion) {
    let p = Presentation::surface(4, false).unwrap();
    let s = AmalgamSplitting::find(&p).unwrap();
    let words = reduced_words_of_length(4, 5);
    c.bench_function("normal form N4 length 5", |b| {
        b.iter(|| {
            for w in &words {
                black_box(s.canonical_word(w));
            }
        })
    });
}

fn defect(c: &mut Criterion) {
    let f = Quasimorphism::brooks("ab".parse().unwrap()).unwrap();
    c.bench_function("defect brooks(ab) pairs up to 5", |b| {
        b.iter(|| {
            defect_estimate(
                &f,
                &PairSamples::Exhaustive {
                    rank: 2,
                    max_len: black_box(5),
                },
            )
        })
    });
}

fn coned_bfs(c: &mut Criterion) {
    let p = Presentation::surface(3, false).unwrap();
    let ball = CayleyBall::build(&p, 6, &Budget::default()).unwrap();
    let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(3))
        .unwrap()
        .with_horizon(5);
    c.bench_function("relative ball N3 r 4", |b| b.iter(|| coned.dhat_ball(black_box(4))));
}

fn stallings(c: &mut Criterion) {
    let gens: Vec<Word> = ["aa", "ab", "aB", "bab", "aaBA"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    c.bench_function("stallings fold", |b| {
        b.iter(|| SubgroupAutomaton::fold(black_box(&gens), 2).unwrap())
    });
}

criterion_group!(benches, ball_build, normal_form, defect, coned_bfs, stallings);
criterion_main!(benches);
