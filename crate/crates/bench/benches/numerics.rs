use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use num_rational::Ratio;

use qrenorm_core::maass::{
    bessel_k, cohen_residual, k0_f64, period_integral, phi_eval, quantum_eval_fw, MaassEvalContext, QuadratureSpec,
    UpperHalfPoint,
};
use qrenorm_core::MpReal;

fn bessel(c: &mut Criterion) {
    c.bench_function("k0_f64(2.5)", |b| b.iter(|| k0_f64(black_box(2.5))));
    let t = MpReal::from_f64(2.5, 160);
    c.bench_function("bessel_k 35 digits", |b| b.iter(|| bessel_k(0.0, &t, 35).unwrap()));
}

fn waveform(c: &mut Criterion) {
    let ctx = MaassEvalContext::phi0_w_for(0.2, 1e-10).unwrap();
    let z = UpperHalfPoint::new(0.3, 0.2).unwrap();
    c.bench_function("phi0_w at y = 0.2", |b| b.iter(|| phi_eval(&ctx, black_box(z)).unwrap()));
    let ctx = MaassEvalContext::phi0_for(1.0, 1e-12).unwrap();
    let quad = QuadratureSpec::default();
    c.bench_function("period integral phi0", |b| {
        b.iter(|| period_integral(&ctx, black_box(Complex64::new(0.1, 1.2)), &quad).unwrap())
    });
}

fn quantum(c: &mut Criterion) {
    c.bench_function("cohen residual at 7/37", |b| b.iter(|| cohen_residual(black_box(Ratio::new(7, 37)), 50)));
    c.bench_function("f_W at 5/12", |b| b.iter(|| quantum_eval_fw(black_box(Ratio::new(5, 12)), 50).unwrap()));
}

criterion_group!(benches, bessel, waveform, quantum);
criterion_main!(benches);
