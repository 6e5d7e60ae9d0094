mod common;

use rand::Rng;

use itercert::certify::{certify_reich, certify_spectral, Verdict};
use itercert::iterative::{iterate, iteration_matrix, IterateOptions, Splitting, TraceStatus};
use itercert::linalg::{DenseVector, RealMatrix};
use itercert::sampling::{self, planted_splitting, SampleRng};
use itercert::spectral::{eigenvalues_qr, spectral_radius};

const STARTS: usize = 10;

fn statuses(s: &Splitting, rng: &mut SampleRng, opts: &IterateOptions) -> Vec<(TraceStatus, usize)> {
    let n = s.dim();
    let zero = DenseVector::zeros(n);
    (0..STARTS)
        .map(|_| {
            let x0 = sampling::random_vector(rng, n);
            let t = iterate(s, &zero, &x0, opts, None).unwrap();
            (t.status, t.iterations)
        })
        .collect()
}

fn check_certificate(s: &Splitting, rng: &mut SampleRng, label: &str) {
    let cert = certify_spectral(s, 1e-10).unwrap();
    let runs = statuses(s, rng, &IterateOptions::default());
    match cert.verdict {
        Verdict::Converges => {
            let budget = 3 * cert.predicted_iters.unwrap() as usize;
            for (status, iters) in runs {
                assert_eq!(status, TraceStatus::ReachedTol, "{label}");
                assert!(iters <= budget, "{label}: {iters} iterations, budget {budget}");
            }
        }
        Verdict::Diverges => {
            assert!(runs.iter().any(|(st, _)| *st == TraceStatus::Diverged), "{label}");
        }
        Verdict::Unknown => {}
    }
}

#[test]
fn spectral_certificate_is_sound_on_diagonally_dominant_systems() {
    let mut rng = sampling::rng(11);
    for trial in 0..60 {
        let n = 1 + trial % 32;
        let a = sampling::random_diag_dominant(&mut rng, n).embed();
        let s = if trial % 2 == 0 { Splitting::jacobi(&a) } else { Splitting::gauss_seidel(&a) }.unwrap();
        let cert = certify_spectral(&s, 1e-10).unwrap();
        assert_eq!(cert.verdict, Verdict::Converges, "trial {trial}");
        check_certificate(&s, &mut rng, &format!("dominant trial {trial}"));
    }
}

#[test]
fn spectral_certificate_is_sound_on_planted_spectra() {
    let mut rng = sampling::rng(12);
    for trial in 0..80 {
        let n = 1 + trial % 32;
        let rho = if trial % 3 == 0 { rng.gen_range(1.05..3.0) } else { rng.gen_range(0.05..0.95) };
        let (s, _, _) = planted_splitting(&mut rng, n, rho).unwrap();
        let cert = certify_spectral(&s, 1e-10).unwrap();
        let expected = if rho < 1.0 { Verdict::Converges } else { Verdict::Diverges };
        assert_eq!(cert.verdict, expected, "trial {trial}, rho {rho}");
        check_certificate(&s, &mut rng, &format!("planted trial {trial}, rho {rho}"));
    }
}

#[test]
fn convergence_iff_spectral_radius_below_one() {
    let mut rng = sampling::rng(13);
    for trial in 0..60 {
        let n = 1 + trial % 12;
        let rho = rng.gen_range(0.05..0.95);
        let (s, smat, _) = planted_splitting(&mut rng, n, rho).unwrap();
        for (status, _) in statuses(&s, &mut rng, &IterateOptions::default()) {
            assert_eq!(status, TraceStatus::ReachedTol, "trial {trial}");
        }
        let x0 = sampling::random_vector(&mut rng, n);
        let zero = DenseVector::zeros(n);
        let trace = iterate(&s, &zero, &x0, &IterateOptions::default(), None).unwrap();
        assert!(common::recurrence_defect(&trace, &smat, &zero) <= 1e-10);
    }
    for trial in 0..20 {
        let n = 1 + trial % 12;
        let rho = rng.gen_range(1.05..3.0);
        let (s, _, _) = planted_splitting(&mut rng, n, rho).unwrap();
        let runs = statuses(&s, &mut rng, &IterateOptions::default());
        assert!(runs.iter().any(|(st, _)| *st == TraceStatus::Diverged), "trial {trial}");
    }
}

#[test]
fn reich_is_sound_on_spd_matrices() {
    let mut rng = sampling::rng(14);
    for trial in 0..40 {
        let n = 1 + trial % 16;
        let a = sampling::random_spd(&mut rng, n);
        let cert = certify_reich(&a, 1e-10).unwrap();
        assert_eq!(cert.verdict, Verdict::Converges, "trial {trial}: {}", cert.notes);
        let s = Splitting::gauss_seidel(&a.embed()).unwrap();
        let rho = spectral_radius(&eigenvalues_qr(&iteration_matrix(&s).unwrap()).unwrap());
        assert!(rho < 1.0, "trial {trial}: rho {rho}");
    }
}

#[test]
fn reich_stays_silent_where_spectral_radius_decides() {
    // upper triangular, not symmetric: Reich cannot apply, rho(S_GS) = 0
    let a = RealMatrix::from_rows(&[[4.0, 1.0, 2.0], [0.0, 4.0, 1.0], [0.0, 0.0, 4.0]]).unwrap();
    let reich = certify_reich(&a, 1e-10).unwrap();
    let spectral = certify_spectral(&Splitting::gauss_seidel(&a.embed()).unwrap(), 1e-10).unwrap();
    assert_eq!(reich.verdict, Verdict::Unknown);
    assert_eq!(spectral.verdict, Verdict::Converges);

    // symmetric but indefinite: Reich is silent, and GS does diverge
    let b = RealMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
    assert_eq!(certify_reich(&b, 1e-10).unwrap().verdict, Verdict::Unknown);
    let s = Splitting::gauss_seidel(&b.embed()).unwrap();
    assert_eq!(certify_spectral(&s, 1e-10).unwrap().verdict, Verdict::Diverges);
}
