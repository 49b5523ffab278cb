use num_complex::Complex64 as C64;

use super::{MultiplierSpec, Series, SymbolMeta};
use crate::error::{HeisenError, Result};

/// A catalog entry: parameter names with defaults (`None` means required).
#[derive(Clone, Copy, Debug)]
pub struct SymbolInfo {
    pub label: &'static str,
    pub params: &'static [(&'static str, Option<f64>)],
    pub formula: &'static str,
}

const CATALOG: &[SymbolInfo] = &[
    SymbolInfo { label: "identity", params: &[], formula: "1" },
    SymbolInfo { label: "heat", params: &[("t", Some(1.0))], formula: "exp(-t*s)" },
    SymbolInfo { label: "bessel", params: &[("r", None)], formula: "(1+s)^(-r/2)" },
    SymbolInfo { label: "lp", params: &[("n", Some(1.0))], formula: "s^n*exp(-s)" },
    SymbolInfo { label: "sigma", params: &[("k", Some(1.0))], formula: "s^k" },
    SymbolInfo { label: "mihlin", params: &[], formula: "s/(1+s)" },
    SymbolInfo {
        label: "schrodinger",
        params: &[("nu", None), ("t", None), ("r", Some(0.0))],
        formula: "exp(i*t*s^nu)*(1+s)^(-r/2)",
    },
    SymbolInfo {
        label: "schrodinger_high",
        params: &[("nu", None), ("t", None), ("r", Some(0.0))],
        formula: "exp(i*t*s^nu)*(1+s)^(-r/2)*chi_high((1+t)*s^nu)",
    },
    SymbolInfo {
        label: "schrodinger_low",
        params: &[("nu", None), ("t", None), ("r", Some(0.0))],
        formula: "exp(i*t*s^nu)*(1+s)^(-r/2)*chi_low((1+t)*s^nu)",
    },
    SymbolInfo { label: "chi_low", params: &[], formula: "1 on [0,1/2], 0 on [1,inf), smooth" },
    SymbolInfo { label: "chi_high", params: &[], formula: "1 - chi_low(s)" },
];

pub fn builtin_symbols() -> &'static [SymbolInfo] {
    CATALOG
}

fn transition(x: &Series) -> (Series, Series) {
    let (one, zero) = (Series::constant(1.0, x.len()), Series::constant(0.0, x.len()));
    let v = x.value().re;
    if v <= 0.5 {
        return (one, zero);
    }
    if v >= 1.0 {
        return (zero, one);
    }
    let u = *x * 2.0 + -1.0;
    let a = (1.0 - u).flat_exp();
    let b = u.flat_exp();
    let sum = a + b;
    (a / sum, b / sum)
}

/// Smooth cutoff, identically 1 on `[0, ½]` and 0 on `[1, ∞)`.
pub fn chi_low(x: &Series) -> Series {
    transition(x).0
}

/// `1 − χ^L`.
pub fn chi_high(x: &Series) -> Series {
    transition(x).1
}

/// `e^{itσ^ν}(1+σ)^{−r/2}` and `σ^ν`.
fn propagator(nu: f64, t: f64, r: f64, s: &Series) -> (Series, Series) {
    let p = s.powf(nu);
    let mut expo = p * C64::new(0.0, t);
    if r != 0.0 {
        expo = expo + (*s + 1.0).ln().scale(-r / 2.0);
    }
    (expo.exp(), p)
}

/// Builds a catalog symbol from its label and `name = value` parameters.
pub fn symbol(label: &str, params: &[(String, f64)]) -> Result<MultiplierSpec> {
    let info = CATALOG
        .iter()
        .find(|i| i.label == label)
        .ok_or_else(|| HeisenError::InvalidArgument(format!("unknown symbol `{label}`")))?;
    for (k, _) in params {
        if !info.params.iter().any(|(n, _)| n == k) {
            return Err(HeisenError::InvalidArgument(format!("symbol `{label}` has no parameter `{k}`")));
        }
    }
    let get = |name: &str| -> Result<f64> {
        if let Some((_, v)) = params.iter().rev().find(|(k, _)| k == name) {
            return Ok(*v);
        }
        let (_, def) = info.params.iter().find(|(n, _)| *n == name).expect("declared parameter");
        def.ok_or_else(|| HeisenError::InvalidArgument(format!("symbol `{label}` needs `{name}`")))
    };
    let nonneg_int = |name: &str| -> Result<u32> {
        let v = get(name)?;
        if v < 0.0 || v.fract() != 0.0 || v > 64.0 {
            return Err(HeisenError::InvalidArgument(format!("`{name}` must be a small nonnegative integer")));
        }
        Ok(v as u32)
    };
    let text = render(label, info, &get)?;
    let spec = match label {
        "identity" => MultiplierSpec::analytic(text, |s| Series::constant(1.0, s.len())).with_decay(0.0),
        "heat" => {
            let t = get("t")?;
            MultiplierSpec::analytic(text, move |s| (*s * -t).exp()).with_decay(f64::INFINITY).with_time(t)
        }
        "bessel" => {
            let r = get("r")?;
            MultiplierSpec::analytic(text, move |s| (*s + 1.0).powf(-r / 2.0)).with_decay(r / 2.0)
        }
        "lp" => {
            let n = nonneg_int("n")?;
            if n == 0 {
                return Err(HeisenError::InvalidArgument("`n` must be at least 1".into()));
            }
            MultiplierSpec::analytic(text, move |s| s.powi(n) * (-*s).exp()).with_decay(f64::INFINITY)
        }
        "sigma" => {
            let k = nonneg_int("k")?;
            MultiplierSpec::analytic(text, move |s| s.powi(k)).with_decay(-(k as f64))
        }
        "mihlin" => MultiplierSpec::analytic(text, |s| *s / (*s + 1.0)).with_decay(0.0),
        "schrodinger" | "schrodinger_high" | "schrodinger_low" => {
            let (nu, t, r) = (get("nu")?, get("t")?, get("r")?);
            if nu <= 0.0 {
                return Err(HeisenError::InvalidArgument("`nu` must be positive".into()));
            }
            let meta = SymbolMeta {
                growth: None,
                decay: Some(if label == "schrodinger_low" { f64::INFINITY } else { r / 2.0 }),
                t: Some(t),
            };
            let low = label == "schrodinger_low";
            let cut = label != "schrodinger";
            MultiplierSpec::analytic(text, move |s| {
                let (u, p) = propagator(nu, t, r, s);
                if !cut {
                    return u;
                }
                let x = p * (1.0 + t);
                let v = x.value().re;
                if (low && v <= 0.5) || (!low && v >= 1.0) {
                    return u;
                }
                u * if low { chi_low(&x) } else { chi_high(&x) }
            })
            .with_meta(meta)
        }
        "chi_low" => MultiplierSpec::analytic(text, chi_low).with_decay(f64::INFINITY),
        "chi_high" => MultiplierSpec::analytic(text, chi_high).with_decay(0.0),
        _ => unreachable!("catalog and constructors agree"),
    };
    Ok(spec)
}

fn render(label: &str, info: &SymbolInfo, get: &dyn Fn(&str) -> Result<f64>) -> Result<String> {
    if info.params.is_empty() {
        return Ok(label.to_string());
    }
    let parts: Result<Vec<String>> = info.params.iter().map(|(n, _)| Ok(format!("{n}={}", get(n)?))).collect();
    Ok(format!("{label}({})", parts?.join(", ")))
}

/// Parses `label` or `label(name=value, ...)`.
pub fn parse_symbol(text: &str) -> Result<MultiplierSpec> {
    let text = text.trim();
    let err = |msg: String| HeisenError::Parse { pos: 0, msg };
    let (label, rest) = match text.find('(') {
        Some(i) => (text[..i].trim(), Some(&text[i + 1..])),
        None => (text, None),
    };
    if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(err(format!("bad symbol label `{label}`")));
    }
    let mut params = Vec::new();
    if let Some(rest) = rest {
        let body = rest.trim_end().strip_suffix(')').ok_or_else(|| err("missing `)`".into()))?;
        for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| err(format!("expected name=value, got `{item}`")))?;
            let v: f64 = v.trim().parse().map_err(|_| err(format!("bad number `{}`", v.trim())))?;
            if !v.is_finite() {
                return Err(err(format!("non-finite parameter `{}`", k.trim())));
            }
            params.push((k.trim().to_string(), v));
        }
    }
    symbol(label, &params)
}
