//! Implementations of the four subcommands.

use std::path::Path;

use modclust_core::datagen::{self, AttributeData, SimulationPreset};
use modclust_core::validity::{self, GridSpec, ValidityOptions};
use modclust_core::{
    crisp_assign, fit_fcmd_msc, fit_fcmd_penalty, fit_fcmo_msc, fit_fcmo_penalty, CutoffRule,
    FitConfig, FitResult, ModularityMatrix, PenaltyConfig,
};

use crate::args::{
    Algorithm, CutoffRuleArg, FitArgs, GridArgs, SimulateArgs, ValidityArgs,
    parse_float_range, parse_usize_range,
};
use crate::dataset::{load_dataset, AdjacencyFormat, AttributeKind, DatasetBundle};
use crate::error::{CliError, Result};
use crate::manifest::{digest_file, FitManifest, GridManifest, RunManifest, RunSpec, SimulateManifest};
use crate::output;

fn attribute_kind(algorithm: Algorithm) -> AttributeKind {
    if algorithm.is_categorical() {
        AttributeKind::Categorical
    } else {
        AttributeKind::Numeric
    }
}

fn adjacency_format(arg: crate::args::AdjacencyFormatArg) -> AdjacencyFormat {
    match arg {
        crate::args::AdjacencyFormatArg::Dense => AdjacencyFormat::Dense,
        crate::args::AdjacencyFormatArg::EdgeList => AdjacencyFormat::EdgeList,
    }
}

fn cutoff_rule(arg: CutoffRuleArg) -> CutoffRule {
    match arg {
        CutoffRuleArg::Geq => CutoffRule::GreaterOrEqual,
        CutoffRuleArg::Strict => CutoffRule::Strict,
    }
}

fn data_digests(args: &crate::args::DataArgs) -> Result<Vec<crate::manifest::InputDigest>> {
    let mut inputs = vec![
        digest_file("attributes", &args.attributes)?,
        digest_file("adjacency", &args.adjacency)?,
    ];
    if let Some(schema) = &args.schema {
        inputs.push(digest_file("schema", schema)?);
    }
    Ok(inputs)
}

fn load_for(algorithm: Algorithm, data: &crate::args::DataArgs) -> Result<DatasetBundle> {
    load_dataset(
        &data.attributes,
        &data.adjacency,
        adjacency_format(data.adjacency_format),
        attribute_kind(algorithm),
        data.schema.as_deref(),
    )
}

pub fn run_fit(args: &FitArgs) -> Result<()> {
    let (msc_cfg, penalty_cfg) = build_fit_configs(args)?;
    let bundle = load_for(args.algorithm, &args.data)?;

    let fit = dispatch_fit(args.algorithm, &bundle, msc_cfg.as_ref(), penalty_cfg.as_ref())?;
    let crisp = crisp_assign(&fit.membership, args.cutoff, cutoff_rule(args.cutoff_rule))?;

    let manifest = RunManifest::new(
        args.seed,
        data_digests(&args.data)?,
        RunSpec::Fit(FitManifest {
            algorithm: args.algorithm.name().into(),
            adjacency_format: args.data.adjacency_format.name().into(),
            msc: msc_cfg,
            penalty: penalty_cfg,
            cutoff: args.cutoff,
            cutoff_rule: args.cutoff_rule.name().into(),
            include_self_pairs: false,
        }),
    );
    output::save_fit(
        &args.out,
        args.algorithm.name(),
        &bundle.ids,
        &bundle.attributes,
        &fit,
        &crisp,
        &manifest,
    )?;
    println!(
        "fit {}: objective {:.6}, {} iterations, converged {}, wrote {}",
        args.algorithm.name(),
        fit.objective,
        fit.n_iterations,
        fit.converged,
        args.out.display()
    );
    Ok(())
}

fn build_fit_configs(args: &FitArgs) -> Result<(Option<FitConfig>, Option<PenaltyConfig>)> {
    if args.algorithm.is_penalty() {
        if args.gamma.is_some() {
            return Err(CliError::Usage(
                "--gamma applies to the medoids/modes algorithms; use --beta here".into(),
            ));
        }
        let beta = args
            .beta
            .ok_or_else(|| CliError::Usage("penalty algorithms require --beta".into()))?;
        Ok((
            None,
            Some(PenaltyConfig {
                n_clusters: args.c,
                beta,
                entropy_weight: args.p,
                max_iter: args.max_iter,
                conv_tol: args.conv_tol,
                n_restarts: args.restarts,
                seed: args.seed,
            }),
        ))
    } else {
        if args.beta.is_some() {
            return Err(CliError::Usage(
                "--beta applies to the penalty algorithms; use --gamma here".into(),
            ));
        }
        let gamma = args
            .gamma
            .ok_or_else(|| CliError::Usage("medoids/modes algorithms require --gamma".into()))?;
        Ok((
            Some(FitConfig {
                n_clusters: args.c,
                gamma,
                entropy_weight: args.p,
                max_iter: args.max_iter,
                conv_tol: args.conv_tol,
                n_restarts: args.restarts,
                seed: args.seed,
                unweighted_attr_update: args.unweighted_attr_update,
            }),
            None,
        ))
    }
}

fn dispatch_fit(
    algorithm: Algorithm,
    bundle: &DatasetBundle,
    msc: Option<&FitConfig>,
    penalty: Option<&PenaltyConfig>,
) -> Result<FitResult> {
    let fit = match (algorithm, &bundle.attributes) {
        (Algorithm::Medoids, AttributeData::Numeric(x)) => {
            fit_fcmd_msc(x, &bundle.adjacency, msc.expect("msc config"))?
        }
        (Algorithm::Modes, AttributeData::Categorical(x)) => {
            fit_fcmo_msc(x, &bundle.adjacency, msc.expect("msc config"))?
        }
        (Algorithm::MedoidsPenalty, AttributeData::Numeric(x)) => {
            fit_fcmd_penalty(x, &bundle.adjacency, penalty.expect("penalty config"))?
        }
        (Algorithm::ModesPenalty, AttributeData::Categorical(x)) => {
            fit_fcmo_penalty(x, &bundle.adjacency, penalty.expect("penalty config"))?
        }
        _ => unreachable!("attribute kind is derived from the algorithm"),
    };
    Ok(fit)
}

pub fn run_grid(args: &GridArgs) -> Result<()> {
    if args.algorithm.is_penalty() {
        return Err(CliError::Usage(
            "grid search sweeps gamma; use --algorithm medoids or modes".into(),
        ));
    }
    let spec = GridSpec {
        c_values: parse_usize_range(&args.c_range)?,
        gamma_values: parse_float_range(&args.gamma_range)?,
        entropy_weight: args.p,
        max_iter: args.max_iter,
        conv_tol: args.conv_tol,
        n_restarts: args.restarts,
        seed: args.seed,
        unweighted_attr_update: args.unweighted_attr_update,
        validity: ValidityOptions {
            include_self_pairs: args.include_self_pairs,
        },
    };
    let bundle = load_for(args.algorithm, &args.data)?;

    let grid = match (&bundle.attributes, args.algorithm) {
        (AttributeData::Numeric(x), Algorithm::Medoids) => {
            validity::grid_search_medoids(x, &bundle.adjacency, &spec)?
        }
        (AttributeData::Categorical(x), Algorithm::Modes) => {
            validity::grid_search_modes(x, &bundle.adjacency, &spec)?
        }
        _ => unreachable!("attribute kind is derived from the algorithm"),
    };

    let best_crisp = match grid.best_fit() {
        Some((_, fit)) => Some(crisp_assign(
            &fit.membership,
            args.cutoff,
            cutoff_rule(args.cutoff_rule),
        )?),
        None => None,
    };

    let manifest = RunManifest::new(
        args.seed,
        data_digests(&args.data)?,
        RunSpec::Grid(GridManifest {
            algorithm: args.algorithm.name().into(),
            adjacency_format: args.data.adjacency_format.name().into(),
            spec: spec.clone(),
            cutoff: args.cutoff,
            cutoff_rule: args.cutoff_rule.name().into(),
        }),
    );
    output::save_grid(
        &args.out,
        args.algorithm.name(),
        &bundle.ids,
        &bundle.attributes,
        &grid,
        best_crisp.as_ref(),
        &manifest,
    )?;
    match grid.best {
        Some((c, gamma, value)) => println!(
            "grid {}: best C={c} gamma={gamma} validity={value:.4}, wrote {}",
            args.algorithm.name(),
            args.out.display()
        ),
        None => println!(
            "grid {}: no cell produced a finite validity value, wrote {}",
            args.algorithm.name(),
            args.out.display()
        ),
    }
    Ok(())
}

pub fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let preset = SimulationPreset::from_name(&args.preset).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown preset '{}'; available: {}",
            args.preset,
            SimulationPreset::ALL_NAMES.join(", ")
        ))
    })?;
    let dataset = datagen::generate_preset(preset, args.seed)?;
    let width = dataset.attributes.n_units().to_string().len();
    let ids: Vec<String> = (1..=dataset.attributes.n_units())
        .map(|n| format!("u{n:0width$}"))
        .collect();
    let manifest = RunManifest::new(
        args.seed,
        Vec::new(),
        RunSpec::Simulate(SimulateManifest {
            preset: preset.name().into(),
            seed: args.seed,
        }),
    );
    output::save_simulation(&args.out, &ids, &dataset, &manifest)?;
    println!(
        "simulate {}: {} units, total strength {}, wrote {}",
        preset.name(),
        dataset.attributes.n_units(),
        dataset.adjacency.total_strength(),
        args.out.display()
    );
    Ok(())
}

pub fn run_validity(args: &ValidityArgs) -> Result<()> {
    let manifest = RunManifest::read(&args.run_dir.join("manifest.json"))?;
    let fit_manifest = match &manifest.spec {
        RunSpec::Fit(m) => m,
        _ => {
            return Err(CliError::Usage(
                "validity recomputation expects a directory written by `modclust fit`".into(),
            ))
        }
    };
    let algorithm = Algorithm::from_name(&fit_manifest.algorithm)
        .ok_or_else(|| CliError::Data(format!("unknown algorithm '{}'", fit_manifest.algorithm)))?;
    let format = crate::args::AdjacencyFormatArg::from_name(&fit_manifest.adjacency_format)
        .ok_or_else(|| {
            CliError::Data(format!(
                "unknown adjacency format '{}'",
                fit_manifest.adjacency_format
            ))
        })?;

    let attr_path = manifest
        .input_path("attributes")
        .ok_or_else(|| CliError::Data("manifest lists no attribute input".into()))?;
    let adj_path = manifest
        .input_path("adjacency")
        .ok_or_else(|| CliError::Data("manifest lists no adjacency input".into()))?;
    let schema_path = manifest.input_path("schema").map(Path::new);

    let bundle = load_dataset(
        Path::new(attr_path),
        Path::new(adj_path),
        adjacency_format(format),
        attribute_kind(algorithm),
        schema_path,
    )?;
    let (ids, membership, _) = output::read_memberships(&args.run_dir.join("memberships.csv"))?;
    if ids != bundle.ids {
        return Err(CliError::Data(
            "memberships.csv lists different units than the attribute file".into(),
        ));
    }

    let b = ModularityMatrix::from_adjacency(&bundle.adjacency)?;
    let opts = ValidityOptions {
        include_self_pairs: args.include_self_pairs || fit_manifest.include_self_pairs,
    };
    let prototypes_path = args.run_dir.join("prototypes.csv");
    let value = match &bundle.attributes {
        AttributeData::Numeric(x) => {
            let medoids = output::read_medoid_prototypes(&prototypes_path, &bundle.ids)?;
            let result = FitResult {
                membership,
                prototypes: modclust_core::Prototypes::Medoids(medoids),
                objective: 0.0,
                n_iterations: 0,
                converged: true,
                restart_index: 0,
            };
            validity::validity_medoids(&result, x, &b, &opts)?
        }
        AttributeData::Categorical(x) => {
            let modes = output::read_mode_prototypes(&prototypes_path, x.domains())?;
            let result = FitResult {
                membership,
                prototypes: modclust_core::Prototypes::Modes(modes),
                objective: 0.0,
                n_iterations: 0,
                converged: true,
                restart_index: 0,
            };
            validity::validity_modes(&result, x, &b, &opts)?
        }
    };
    println!("validity {value}");
    Ok(())
}
