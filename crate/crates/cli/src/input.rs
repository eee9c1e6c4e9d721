use std::fs::File;
use std::io::BufReader;

use qconc::bounds::{applicable_theorems, Theorem};
use qconc::states::{
    load_density_matrix_with, DensityMatrix, LoadOptions, NoisyFamily, ParameterName, Repair,
};
use qconc::witness::LowerBoundSource;

use crate::args::{FamilyArgs, FamilyName, SourceName, StateArgs};
use crate::error::{usage, CliError, CliResult};

const DEFAULT_N: usize = 4;

pub struct ResolvedFamily {
    pub name: FamilyName,
    pub family: NoisyFamily,
}

impl ResolvedFamily {
    pub fn parameter_label(&self) -> &'static str {
        match self.family.parameter {
            ParameterName::T => "t",
            ParameterName::P => "p",
            ParameterName::A => "a",
        }
    }
}

pub fn family(args: &FamilyArgs) -> CliResult<Option<ResolvedFamily>> {
    let Some(name) = args.family else {
        if args.n.is_some() || args.excitations.is_some() {
            return usage("--n and --excitations need --family");
        }
        return Ok(None);
    };
    if args.excitations.is_some() && name != FamilyName::DickeNoise {
        return usage("--excitations only applies to dicke-noise");
    }
    let n = args.n.unwrap_or(DEFAULT_N);
    let family = match name {
        FamilyName::WNoise => NoisyFamily::w_noise(n)?,
        FamilyName::DickeNoise => NoisyFamily::dicke_noise(n, args.excitations.unwrap_or(n / 2))?,
        FamilyName::GhzNoise => NoisyFamily::ghz_noise(n)?,
        FamilyName::Ex3 | FamilyName::Ex4 => {
            if n != 4 {
                return usage("ex3 and ex4 are four-qubit families");
            }
            if name == FamilyName::Ex3 {
                NoisyFamily::example3()
            } else {
                NoisyFamily::example4()
            }
        }
    };
    Ok(Some(ResolvedFamily { name, family }))
}

pub struct ResolvedState {
    pub rho: DensityMatrix,
    pub family: Option<FamilyName>,
}

pub fn state(args: &StateArgs) -> CliResult<ResolvedState> {
    if let Some(path) = &args.state {
        let file = File::open(path).map_err(|source| CliError::File {
            path: path.display().to_string(),
            source,
        })?;
        let opts = LoadOptions {
            repair: if args.clamp_eigenvalues {
                Repair::ClampEigenvalues
            } else {
                Repair::Reject
            },
            tolerances: None,
        };
        let rho = load_density_matrix_with(BufReader::new(file), opts)?;
        return Ok(ResolvedState { rho, family: None });
    }
    let Some(resolved) = family(&args.family)? else {
        return usage("give either --state <file> or --family <name> --param <x>");
    };
    let Some(x) = args.param else {
        return usage("--family needs --param");
    };
    Ok(ResolvedState {
        rho: resolved.family.mixture(x)?,
        family: Some(resolved.name),
    })
}

pub fn source(name: SourceName) -> LowerBoundSource {
    match name {
        SourceName::T1 => LowerBoundSource::Theorem1,
        SourceName::T2 => LowerBoundSource::Theorem2,
        SourceName::T3 => LowerBoundSource::Theorem3,
        SourceName::GhzExact => LowerBoundSource::GhzExact,
        SourceName::PureExact => LowerBoundSource::PureExact,
    }
}

/// Requested sources, or every theorem applicable at `n` plus GHZ_EXACT on the GHZ family.
pub fn sources(
    requested: &[SourceName],
    n: usize,
    family: Option<FamilyName>,
) -> CliResult<Vec<LowerBoundSource>> {
    let mut out: Vec<LowerBoundSource> = if requested.is_empty() {
        applicable_theorems(n)
            .into_iter()
            .map(|t| match t {
                Theorem::T1 => LowerBoundSource::Theorem1,
                Theorem::T2 => LowerBoundSource::Theorem2,
                Theorem::T3 => LowerBoundSource::Theorem3,
                Theorem::GhzExact => LowerBoundSource::GhzExact,
            })
            .collect()
    } else {
        requested.iter().map(|&s| source(s)).collect()
    };
    if requested.is_empty() && family == Some(FamilyName::GhzNoise) {
        out.push(LowerBoundSource::GhzExact);
    }
    out.dedup();
    if out.is_empty() {
        return usage(format!("no default bound source applies to {n} qubits; pass --source"));
    }
    Ok(out)
}

/// Requested k values, or 2..=n.
pub fn ks(requested: &[usize], n: usize) -> Vec<usize> {
    if requested.is_empty() {
        (2..=n).collect()
    } else {
        requested.to_vec()
    }
}
