// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qiso_bench::{magic_pair, mermin_certificate, regular_pair, regular_relabelled};
use qiso_core::equitable::{common_equitable_partition, fractional_iso};
use qiso_core::graph::{char_poly, find_isomorphism, independence_number};
use qiso_core::nonsignalling::{build_ns_correlation, verify_nonsignalling};
use qiso_core::quantum::{certificate_correlation, verify_qiso_certificate};

fn classical(c: &mut Criterion) {
    let (gf, gf0) = magic_pair();
    c.bench_function("iso/magic_square_pair", |b| {
        b.iter(|| find_isomorphism(black_box(&gf), black_box(&gf0)).unwrap())
    });
    let (g, h) = regular_relabelled(60, 4, 1);
    c.bench_function("iso/regular_60_4_relabelled", |b| {
        b.iter(|| find_isomorphism(black_box(&g), black_box(&h)).unwrap())
    });
    c.bench_function("alpha/g_f", |b| b.iter(|| independence_number(black_box(&gf)).unwrap()));
    c.bench_function("alpha/g_f0", |b| b.iter(|| independence_number(black_box(&gf0)).unwrap()));
    c.bench_function("char_poly/g_f", |b| b.iter(|| char_poly(black_box(&gf))));
}

fn fractional(c: &mut Criterion) {
    let (g, h) = regular_pair(32, 5, 2);
    c.bench_function("fractional_iso/regular_32_5", |b| {
        b.iter(|| fractional_iso(black_box(&g), black_box(&h)))
    });
    let (g, h) = regular_pair(12, 3, 3);
    let cep = common_equitable_partition(&g, &h).expect("equal order and degree");
    c.bench_function("ns/build_regular_12_3", |b| {
        b.iter(|| build_ns_correlation(black_box(&g), black_box(&h), &cep).unwrap())
    });
    let corr = build_ns_correlation(&g, &h, &cep).unwrap();
    c.bench_function("ns/verify_regular_12_3", |b| b.iter(|| verify_nonsignalling(black_box(&corr))));
}

fn quantum(c: &mut Criterion) {
    let (gf, gf0) = magic_pair();
    let cert = mermin_certificate();
    c.bench_function("quantum/verify_mermin_certificate", |b| {
        b.iter(|| verify_qiso_certificate(&gf, &gf0, black_box(&cert), 1e-9).unwrap())
    });
    c.bench_function("quantum/mermin_correlation", |b| {
        b.iter(|| certificate_correlation(&gf, &gf0, black_box(&cert)).unwrap())
    });
}

criterion_group!(benches, classical, fractional, quantum);
criterion_main!(benches);
