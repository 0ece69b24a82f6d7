use std::f64::consts::FRAC_PI_4;

use super::{IfsSystem, Similitude};
use crate::error::{Error, Result};
use crate::RealMatrix;

/// Accepted preset spellings. `(n)` may also be written as a trailing
/// number, e.g. `cantor_dust2`; `rotation(θ)` takes an angle in radians.
pub const PRESET_NAMES: &[&str] = &[
    "cantor_set",
    "cantor_dust(n)",
    "lifted_cantor",
    "sierpinski_carpet",
    "menger_sponge",
    "sc(n)",
    "lifted_carpet",
    "rotation(θ)",
    "non_osc",
];

pub fn preset(name: &str) -> Result<IfsSystem> {
    let name = name.trim();
    let unknown = || Error::UnknownPreset(name.to_string());
    let (base, arg) = split_argument(name).ok_or_else(unknown)?;
    let dim = |default: Option<usize>| -> Result<usize> {
        match arg {
            Some(a) => a.parse::<usize>().map_err(|_| unknown()),
            None => default.ok_or_else(unknown),
        }
    };
    let ifs = match base {
        "cantor_set" if arg.is_none() => cantor_dust(1)?.relabel("cantor_set"),
        "cantor_dust" => cantor_dust(dim(Some(2))?)?,
        "lifted_cantor" if arg.is_none() => cantor_dust(1)?.lifted().relabel("lifted_cantor"),
        "sierpinski_carpet" | "carpet" if arg.is_none() => sc(2)?.relabel("sierpinski_carpet"),
        "menger_sponge" | "menger" if arg.is_none() => sc(3)?.relabel("menger_sponge"),
        "sc" => sc(dim(None)?)?,
        "lifted_carpet" if arg.is_none() => sc(2)?.lifted().relabel("lifted_carpet"),
        "rotation" => {
            let theta = match arg {
                Some(a) => a.parse::<f64>().map_err(|_| unknown())?,
                None => FRAC_PI_4,
            };
            rotation(theta)?
        }
        "non_osc" if arg.is_none() => non_osc()?,
        _ => return Err(unknown()),
    };
    Ok(ifs)
}

/// `name(arg)` or `name<digits>` into `(name, arg)`.
fn split_argument(name: &str) -> Option<(&str, Option<&str>)> {
    if let Some(open) = name.find('(') {
        let inner = name[open + 1..].strip_suffix(')')?;
        return Some((&name[..open], Some(inner.trim())));
    }
    let digits = name.trim_end_matches(|c: char| c.is_ascii_digit());
    if digits.len() < name.len() && !digits.is_empty() {
        return Some((digits, Some(&name[digits.len()..])));
    }
    Some((name, None))
}

impl IfsSystem {
    fn relabel(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }
}

fn check_preset_dim(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::InvalidArgument(format!(
            "preset dimension must be in 1..={max}, got {n}"
        )));
    }
    Ok(())
}

/// Maps `x/3 + (2/3) a` where `a` runs over the binary digits of `s`,
/// least significant digit first.
fn cantor_dust(n: usize) -> Result<IfsSystem> {
    check_preset_dim(n, 12)?;
    let maps = (0..1usize << n)
        .map(|s| {
            let t = (0..n).map(|k| 2.0 / 3.0 * ((s >> k) & 1) as f64).collect();
            Similitude::scaled(1.0 / 3.0, t)
        })
        .collect::<Result<Vec<_>>>()?;
    IfsSystem::new(maps, format!("cantor_dust({n})"), true)
}

/// Ternary digit vectors with at most one digit equal to 1, indexed by
/// `s = Σ a_k 3^(k-1)` in increasing order.
pub(crate) fn sc_index_set(n: usize) -> Vec<usize> {
    (0..3usize.pow(n as u32))
        .filter(|&s| digits3(s, n).iter().filter(|&&d| d == 1).count() <= 1)
        .collect()
}

fn digits3(mut s: usize, n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(s % 3);
        s /= 3;
    }
    out
}

fn sc(n: usize) -> Result<IfsSystem> {
    check_preset_dim(n, 8)?;
    let maps = sc_index_set(n)
        .into_iter()
        .map(|s| {
            let t = digits3(s, n).into_iter().map(|d| d as f64 / 3.0).collect();
            Similitude::scaled(1.0 / 3.0, t)
        })
        .collect::<Result<Vec<_>>>()?;
    IfsSystem::new(maps, format!("sc({n})"), true)
}

/// Four rotated squares `x ↦ R(x - c)/(2√2) + b_s` centred at the
/// quarter points `b_s`.
fn rotation(theta: f64) -> Result<IfsSystem> {
    let r = 1.0 / (2.0 * 2f64.sqrt());
    let (s, c) = theta.sin_cos();
    let rot = RealMatrix::from_rows(vec![vec![c, -s], vec![s, c]])?;
    let shift = [r * (c - s) / 2.0, r * (s + c) / 2.0];
    let centres = [[0.25, 0.25], [0.75, 0.25], [0.25, 0.75], [0.75, 0.75]];
    let maps = centres
        .iter()
        .map(|b| Similitude::new(r, rot.clone(), vec![b[0] - shift[0], b[1] - shift[1]]))
        .collect::<Result<Vec<_>>>()?;
    let label = if theta == FRAC_PI_4 {
        "rotation".to_string()
    } else {
        format!("rotation({theta})")
    };
    IfsSystem::new(maps, label, true)
}

/// Four corner maps of ratio 1/3 and an overlapping central map of ratio 2/3.
fn non_osc() -> Result<IfsSystem> {
    let third = 1.0 / 3.0;
    let two = 2.0 / 3.0;
    let maps = vec![
        Similitude::scaled(third, vec![0.0, 0.0])?,
        Similitude::scaled(third, vec![two, 0.0])?,
        Similitude::scaled(third, vec![0.0, two])?,
        Similitude::scaled(third, vec![two, two])?,
        Similitude::scaled(two, vec![1.0 / 6.0, 1.0 / 6.0])?,
    ];
    IfsSystem::new(maps, "non_osc", false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carpet_index_sets() {
        assert_eq!(sc_index_set(2), vec![0, 1, 2, 3, 5, 6, 7, 8]);
        let mut s3 = sc_index_set(2);
        s3.extend([9, 11, 15, 17, 18, 19, 20, 21, 23, 24, 25, 26]);
        assert_eq!(sc_index_set(3), s3);
        for n in 1..=5 {
            // 2^(n-1) (n + 2) maps
            assert_eq!(sc_index_set(n).len(), (1 << (n - 1)) * (n + 2));
        }
    }

    #[test]
    fn names_and_aliases() {
        assert_eq!(preset("cantor_dust2").unwrap().len(), 4);
        assert_eq!(preset("cantor_dust(3)").unwrap().len(), 8);
        assert_eq!(preset("carpet").unwrap().len(), 8);
        assert_eq!(preset("menger").unwrap().len(), 20);
        assert_eq!(preset("sc(4)").unwrap().len(), 48);
        assert_eq!(preset("lifted_carpet").unwrap().n(), 3);
        assert_eq!(preset("rotation(0.3)").unwrap().len(), 4);
        assert!(matches!(preset("koch"), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("sc"), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("cantor_set(2)"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn cantor_dust_translations() {
        let d = preset("cantor_dust(2)").unwrap();
        let t: Vec<_> = d.maps().iter().map(|m| m.translation.clone()).collect();
        let two = 2.0 / 3.0;
        assert_eq!(t, vec![vec![0.0, 0.0], vec![two, 0.0], vec![0.0, two], vec![two, two]]);
    }

    #[test]
    fn rotation_maps_centre_to_quarter_points() {
        let rot = preset("rotation").unwrap();
        for (m, b) in rot.maps().iter().zip([[0.25, 0.25], [0.75, 0.25], [0.25, 0.75], [0.75, 0.75]]) {
            let c = m.apply(&[0.5, 0.5]);
            assert!((c[0] - b[0]).abs() <= 1e-15 && (c[1] - b[1]).abs() <= 1e-15);
        }
    }

    #[test]
    fn non_osc_shape() {
        let k = preset("non_osc").unwrap();
        let ratios = k.ratios();
        assert_eq!(ratios.iter().filter(|&&r| r == 1.0 / 3.0).count(), 4);
        assert_eq!(ratios[4], 2.0 / 3.0);
        assert!(!k.osc());
    }

    #[test]
    fn large_dimension_is_rejected() {
        assert!(preset("cantor_dust(0)").is_err());
        assert!(preset("sc(9)").is_err());
    }
}
