//! Batch files: optional `seed = N` and `jobs = N` lines, then `[job]`
//! sections of `key = value` lines. `command` names the subcommand; every
//! other key becomes `--key value`, `true` becomes a bare flag and `false`
//! drops it. `name` labels the job. `#` starts a comment.

use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::Parser;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{commands, resolve_jobs, Cli, CliError, Command, Envelope, EXIT_ERROR};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BatchJob {
    pub line: usize,
    pub command: Option<String>,
    pub name: Option<String>,
    pub options: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BatchConfig {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub entries: Vec<BatchJob>,
}

pub fn parse_batch(text: &str) -> Result<BatchConfig, CliError> {
    let mut config = BatchConfig::default();
    let mut current: Option<BatchJob> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| CliError::Usage(format!("batch line {}: {msg}: {raw:?}", n + 1));
        if line == "[job]" {
            config.entries.extend(current.take());
            current = Some(BatchJob { line: n + 1, ..Default::default() });
            continue;
        }
        if line.starts_with('[') {
            return Err(err("only [job] sections are allowed"));
        }
        let (key, val) = line.split_once('=').ok_or_else(|| err("expected key = value"))?;
        let (key, val) = (key.trim().to_string(), val.trim().to_string());
        if key.is_empty() {
            return Err(err("empty key"));
        }
        match &mut current {
            Some(job) => match key.as_str() {
                "command" => job.command = Some(val),
                "name" => job.name = Some(val),
                _ => job.options.push((key, val)),
            },
            None => match key.as_str() {
                "seed" => config.seed = Some(val.parse().map_err(|_| err("seed must be a nonnegative integer"))?),
                "jobs" => config.jobs = Some(val.parse().map_err(|_| err("jobs must be a positive integer"))?),
                _ => return Err(err("only seed and jobs may precede the first [job]")),
            },
        }
    }
    config.entries.extend(current);
    Ok(config)
}

fn job_argv(job: &BatchJob, seed: Option<u64>) -> Result<Vec<String>, String> {
    let command = job.command.as_deref().ok_or("job has no command key")?;
    if command == "batch" {
        return Err("a batch job cannot run batch".into());
    }
    let mut argv = vec!["sodkit".to_string(), command.to_string()];
    for (k, v) in &job.options {
        match v.as_str() {
            "true" => argv.push(format!("--{k}")),
            "false" => {}
            _ => {
                argv.push(format!("--{k}"));
                argv.push(v.clone());
            }
        }
    }
    if let Some(seed) = seed {
        if !job.options.iter().any(|(k, _)| k == "seed") {
            argv.push("--seed".into());
            argv.push(seed.to_string());
        }
    }
    Ok(argv)
}

fn run_job(job: &BatchJob, seed: Option<u64>, timing: bool) -> Result<Envelope, (i32, String)> {
    let argv = job_argv(job, seed).map_err(|e| (EXIT_ERROR, e))?;
    let cli = Cli::try_parse_from(&argv).map_err(|e| (EXIT_ERROR, e.to_string().trim().to_string()))?;
    if matches!(cli.command, Command::Batch(_)) {
        return Err((EXIT_ERROR, "a batch job cannot run batch".into()));
    }
    let start = std::time::Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| commands::run(&cli.command, cli.seed)));
    let mut env = match outcome {
        Ok(Ok(env)) => env,
        Ok(Err(e)) => return Err((EXIT_ERROR, e.to_string())),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "job panicked".into());
            return Err((EXIT_ERROR, format!("internal error: {msg}")));
        }
    };
    if timing {
        env.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(env)
}

/// Runs every job on a pool of `jobs` threads; results keep file order and a
/// failing job does not stop the others.
pub fn run_batch(config: &BatchConfig, seed: Option<u64>, jobs: Option<usize>, timing: bool) -> Envelope {
    let seed = seed.or(config.seed);
    let threads = resolve_jobs(jobs, config.jobs);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    let results: Vec<Value> = pool.install(|| {
        config
            .entries
            .par_iter()
            .enumerate()
            .map(|(index, job)| {
                let head = json!({ "index": index, "line": job.line, "name": job.name, "command": job.command });
                let mut row = head.as_object().cloned().expect("object");
                match run_job(job, seed, timing) {
                    Ok(env) => {
                        row.insert("exit_code".into(), json!(env.exit_code()));
                        row.insert("pass".into(), json!(env.pass));
                        row.insert("report".into(), serde_json::to_value(&env).expect("serializable"));
                    }
                    Err((code, message)) => {
                        row.insert("exit_code".into(), json!(code));
                        row.insert("pass".into(), json!(false));
                        row.insert("error".into(), json!(message));
                    }
                }
                Value::Object(row)
            })
            .collect()
    });
    let count = |code: i64| results.iter().filter(|r| r["exit_code"] == json!(code)).count();
    let (passed, failed, errored) = (count(0), count(1), count(EXIT_ERROR as i64));
    let pass = failed == 0 && errored == 0;
    let mut env = Envelope::new(
        "batch",
        "every job passes",
        pass,
        json!({ "jobs": results, "passed": passed, "failed": failed, "errored": errored }),
    );
    env.seed = seed;
    env
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let cfg = parse_batch(
            "# demo\nseed = 7\n\n[job]\nname = first\ncommand = sod\nphi = x^3  # cubic\n[job]\ncommand = rolle\np-list = 3,5\nall-bases = true\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.entries.len(), 2);
        assert_eq!(cfg.entries[0].name.as_deref(), Some("first"));
        assert_eq!(cfg.entries[0].options, vec![("phi".to_string(), "x^3".to_string())]);
        assert_eq!(
            job_argv(&cfg.entries[1], cfg.seed).unwrap(),
            ["sodkit", "rolle", "--p-list", "3,5", "--all-bases", "--seed", "7"]
        );
        assert!(parse_batch("phi = x\n").is_err());
        assert!(parse_batch("[jobs]\n").is_err());
        assert!(parse_batch("[job]\nno equals sign\n").is_err());
    }

    #[test]
    fn empty_batch_passes() {
        let env = run_batch(&parse_batch("").unwrap(), None, Some(1), false);
        assert!(env.pass);
        assert_eq!(env.result["jobs"], json!([]));
    }

    #[test]
    fn failing_job_is_isolated() {
        let cfg = parse_batch("[job]\ncommand = sod\nphi = x\n[job]\ncommand = sod\nphi = x^3\n[job]\nphi = x^2\n").unwrap();
        let env = run_batch(&cfg, None, Some(2), false);
        assert!(!env.pass);
        let jobs = env.result["jobs"].as_array().unwrap();
        assert_eq!(jobs[0]["exit_code"], json!(2));
        assert_eq!(jobs[1]["exit_code"], json!(0));
        assert_eq!(jobs[1]["report"]["result"]["psi_text"], json!("3X + 3Y"));
        assert_eq!(jobs[2]["error"], json!("job has no command key"));
        assert_eq!(env.result["errored"], json!(2));
    }
}
