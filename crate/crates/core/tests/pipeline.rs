//! End-to-end use of the public API: chains, laws and statistics together.

use skewsim_core::analytic::{self, LawDescriptor};
use skewsim_core::chain::{self, ChainSettings};
use skewsim_core::stats::{self, DEFAULT_BIAS_ALLOWANCE};
use skewsim_core::{Error, RegimeTag, RngStream, SkewConfig};

fn cfg(x: f64, b1: f64, b2: f64) -> SkewConfig {
    SkewConfig::new(x, b1, b2).unwrap()
}

fn draws(c: &SkewConfig, n: u64, seed: u64) -> Vec<f64> {
    let s = ChainSettings::default();
    (0..n)
        .map(|i| chain::hitting_sample(c, &s, seed, i).unwrap())
        .filter(|h| !h.censored)
        .map(|h| h.u_star)
        .collect()
}

#[test]
fn chain_matches_law_across_regimes() {
    for c in [cfg(1.0, 0.5, 0.25), cfg(0.3, 0.7, 0.2), cfg(2.0, 0.4, -0.3)] {
        let law = LawDescriptor::for_config(&c).unwrap();
        let u = draws(&c, 20_000, 17);
        let r = stats::ks_against(|v| law.cdf(v).unwrap(), &u, 0, DEFAULT_BIAS_ALLOWANCE).unwrap();
        assert!(r.pass, "{c:?}: ks {} > {}", r.ks, r.dkw99 + DEFAULT_BIAS_ALLOWANCE);
    }
}

#[test]
fn direct_law_sampling_agrees_with_chain() {
    let c = cfg(1.0, 0.5, -0.5);
    let law = LawDescriptor::for_config(&c).unwrap();
    let mut rng = RngStream::new(4, 0);
    let direct: Vec<f64> = (0..20_000).map(|_| law.sample(&mut rng).unwrap()).collect();
    let chain = draws(&c, 20_000, 4);
    let m_direct = stats::moment(&direct, 1).unwrap();
    let m_chain = stats::moment(&chain, 1).unwrap();
    let se = (m_direct.std_error.powi(2) + m_chain.std_error.powi(2)).sqrt();
    assert!((m_direct.mean - m_chain.mean).abs() < 4.0 * se);
    assert!((m_chain.mean - law.u_star_moment(1).unwrap()).abs() < 4.0 * m_chain.std_error);
}

#[test]
fn negneg_product_has_the_product_law() {
    let c = cfg(1.0, -0.25, -0.5);
    let law = LawDescriptor::for_config(&c).unwrap();
    let s = ChainSettings::default();
    let l: Vec<f64> = (0..20_000)
        .map(|i| chain::run_negneg(&c, &mut RngStream::new(8, i), &s).unwrap().local_time)
        .collect();
    let r = stats::ks_against(|v| law.cdf(v).unwrap(), &l, 0, DEFAULT_BIAS_ALLOWANCE).unwrap();
    assert!(r.pass, "ks {}", r.ks);
}

#[test]
fn laplace_transform_of_chain_draws() {
    let c = cfg(1.0, 0.5, 0.25);
    let u = draws(&c, 20_000, 23);
    for lambda in [0.25, 1.0] {
        let mc = stats::mean_with_error(&u, |v| (-lambda * v).exp()).unwrap();
        let exact = analytic::laplace_u_star(&c, lambda).unwrap();
        assert!((mc.mean - exact).abs() < 4.0 * mc.std_error + 1e-6);
    }
}

#[test]
fn regimes_are_refused_consistently() {
    let negpos = cfg(1.0, -0.3, 0.4);
    assert_eq!(negpos.regime().tag, RegimeTag::NegPos);
    let s = ChainSettings::default();
    assert!(matches!(chain::hitting_sample(&negpos, &s, 0, 0), Err(Error::Regime { .. })));
    assert!(matches!(LawDescriptor::for_config(&negpos), Err(Error::Regime { .. })));
    assert!(matches!(analytic::laplace_u_star(&negpos, 1.0), Err(Error::Regime { .. })));
    // ξ⋆ = 1: the law degenerates and is refused.
    assert!(LawDescriptor::for_config(&cfg(1.0, 0.25, 0.5)).is_err());
    assert!(SkewConfig::new(1.0, 0.0, 0.5).is_err());
    assert!(SkewConfig::new(-1.0, 0.5, 0.5).is_err());
}
