use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::arch_quadrature::{QuadratureSpec, Scheme};
use crate::exact_rings::rational::Q;
use crate::exact_rings::text::parse_rational_list;
use crate::padic_verify::{PrecisionWindow, Splitting};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}, column {col}: {msg}")]
    At { line: usize, col: usize, msg: String },
    #[error("{key}: {msg}")]
    Value { key: String, msg: String },
}

macro_rules! named_enum {
    ($name:ident { $($var:ident => $s:literal),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name { $($var),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$var),+];

            pub fn as_str(&self) -> &'static str {
                match self { $($name::$var => $s),+ }
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($s => Ok($name::$var),)+
                    _ => Err(format!(
                        "unknown value {s:?}; expected one of {}",
                        [$($s),+].join(", ")
                    )),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

named_enum!(Subcommand {
    Euler => "euler",
    VerifyEuler => "verify-euler",
    VerifyGroup => "verify-group",
    VerifyAit => "verify-ait",
    VerifyPadic => "verify-padic",
    Reps => "reps",
    EvalPt => "eval-pt",
    VerifyArch => "verify-arch",
    EmitFixture => "emit-fixture",
});

named_enum!(Rep {
    Wedge2 => "wedge2",
    Std => "std",
    Spin6 => "spin6",
    Gsp4Spin => "gsp4-spin",
    Gsp4Std => "gsp4-std",
});

named_enum!(ArchWhich {
    Norm => "norm",
    Fourier => "fourier",
    Gamma => "gamma",
    Assembly => "assembly",
});

/// Everything a run depends on. Fields that only some subcommands read are ignored by
/// the others.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    /// The field `Q(sqrt -d)`.
    pub d: u64,
    pub primes: Vec<u64>,
    pub splittings: Vec<Splitting>,
    /// Lower bounds for the p-adic windows; each case uses the join with its own minimum.
    pub windows: Vec<PrecisionWindow>,
    pub quadrature: QuadratureSpec,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub rep: Rep,
    pub params: Vec<Q>,
    /// `T` in the syntax of `parse_herm`; read against the field once `d` is known.
    pub t: String,
    /// `Z` as `[[[re, im], [re, im]], [[re, im], [re, im]]]`; `None` is `iI`.
    pub z: Option<[[[f64; 2]; 2]; 2]>,
    pub r: Option<u32>,
    pub bound: Option<i64>,
    pub which: ArchWhich,
    pub grid: Vec<f64>,
    pub modularity: bool,
    pub fixture: Option<String>,
}

pub const KEYS: &[&str] = &[
    "subcommand", "d", "primes", "splitting", "windows", "window", "seed", "output", "rep", "params",
    "T", "Z", "r", "bound", "which", "grid", "modularity", "fixture", "quadrature.scheme",
    "quadrature.points", "quadrature.panels", "quadrature.radius", "quadrature.tol",
];

impl RunConfig {
    pub fn new(subcommand: Subcommand) -> Self {
        RunConfig {
            subcommand,
            d: 1,
            primes: vec![2, 3, 5],
            splittings: vec![Splitting::Inert, Splitting::Split],
            windows: vec![],
            quadrature: QuadratureSpec::default(),
            seed: 1,
            output: None,
            rep: Rep::Wedge2,
            params: vec![],
            t: "1,1,0".into(),
            z: None,
            r: None,
            bound: None,
            which: ArchWhich::Gamma,
            grid: vec![1.0, 1.5, 2.0],
            modularity: false,
            fixture: None,
        }
    }

    /// Sets one key. The message of an error does not include the key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            v.parse().map_err(|e| format!("{v:?}: {e}"))
        }
        fn list<T: FromStr>(v: &str) -> Result<Vec<T>, String>
        where
            T::Err: fmt::Display,
        {
            v.split(',').map(|x| num(x.trim())).collect()
        }
        fn window(v: &str) -> Result<PrecisionWindow, String> {
            match list::<u32>(v)?.as_slice() {
                [a, b] => Ok(PrecisionWindow::new(*a, *b)),
                _ => Err(format!("window must be a,b: {v:?}")),
            }
        }
        match key {
            "subcommand" => self.subcommand = value.parse()?,
            "d" => {
                let d: u64 = num(value)?;
                crate::exact_rings::QuadAlgebra::field(d).map_err(|e| e.to_string())?;
                self.d = d;
            }
            "primes" => self.primes = list(value)?,
            "splitting" => {
                self.splittings = match value {
                    "both" => vec![Splitting::Inert, Splitting::Split],
                    s => vec![s.parse().map_err(|e: crate::padic_verify::PadicError| e.to_string())?],
                }
            }
            "windows" => self.windows = value.split(';').map(|w| window(w.trim())).collect::<Result<_, _>>()?,
            "window" => self.windows = vec![window(value)?],
            "seed" => self.seed = num(value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            "rep" => self.rep = value.parse()?,
            "params" => self.params = parse_rational_list(value).map_err(|e| e.to_string())?,
            "T" => self.t = value.to_string(),
            "Z" => {
                self.z = match value {
                    "i" | "iI" => None,
                    v => Some(serde_json::from_str(v).map_err(|e| format!("Z: {e}"))?),
                }
            }
            "r" => self.r = Some(num(value)?),
            "bound" => {
                let b: i64 = num(value)?;
                if b < 0 {
                    return Err("bound must be nonnegative".into());
                }
                self.bound = Some(b);
            }
            "which" => self.which = value.parse()?,
            "grid" => self.grid = list(value)?,
            "modularity" => self.modularity = num(value)?,
            "fixture" => self.fixture = Some(value.to_string()),
            "quadrature.scheme" => {
                self.quadrature.scheme = match value {
                    "legendre" => Scheme::Legendre,
                    "laguerre" => Scheme::Laguerre,
                    _ => return Err(format!("unknown scheme {value:?}; expected legendre or laguerre")),
                }
            }
            "quadrature.points" => self.quadrature.points = positive(num(value)?)?,
            "quadrature.panels" => self.quadrature.panels = positive(num(value)?)?,
            "quadrature.radius" => self.quadrature.radius = positive_f(num(value)?)?,
            "quadrature.tol" => self.quadrature.tol = positive_f(num(value)?)?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Applies flat `key = value` text on top of `self`. Blank lines and lines starting
    /// with `#` are skipped; a key may appear once.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let indent = raw.len() - raw.trim_start().len();
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let col = |byte: usize| raw[..byte].chars().count() + 1;
            let Some(eq) = raw.find('=') else {
                return Err(ConfigError::At { line, col: col(indent), msg: "expected key = value".into() });
            };
            let key = raw[..eq].trim();
            if key.is_empty() {
                return Err(ConfigError::At { line, col: col(indent), msg: "empty key".into() });
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::At { line, col: col(indent), msg: format!("duplicate key {key:?}") });
            }
            let rest = &raw[eq + 1..];
            let value = rest.trim();
            let vcol = eq + 1 + (rest.len() - rest.trim_start().len());
            let at = if KEYS.contains(&key) { col(vcol) } else { col(indent) };
            self.set(key, value).map_err(|msg| ConfigError::At { line, col: at, msg })?;
        }
        Ok(())
    }

    /// Config text alone, with `subcommand` required.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::new(Subcommand::Euler);
        cfg.apply_text(text)?;
        let has_sub = text
            .lines()
            .any(|l| l.split_once('=').is_some_and(|(k, _)| k.trim() == "subcommand"));
        if !has_sub {
            return Err(ConfigError::Value { key: "subcommand".into(), msg: "missing".into() });
        }
        Ok(cfg)
    }

    /// `self.output` resolved against `out_dir` when relative.
    pub fn output_path(&self, out_dir: Option<&std::path::Path>) -> Option<PathBuf> {
        let p = self.output.as_ref()?;
        Some(match out_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.clone(),
        })
    }
}

fn positive(n: usize) -> Result<usize, String> {
    if n == 0 {
        Err("must be positive".into())
    } else {
        Ok(n)
    }
}

fn positive_f(x: f64) -> Result<f64, String> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err("must be a positive number".into())
    }
}
