#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures().join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap()
}

pub fn essence<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_essence"))
        .args(args)
        .env_remove("ESSENCE_STATE_TABLES")
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn path_arg(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

/// One row of the exit-code matrix: arguments (fixture paths written as
/// `@rel/path`) and the expected code.
pub struct Case {
    pub args: &'static [&'static str],
    pub expect: i32,
}

pub const MATRIX: &[Case] = &[
    Case {
        args: &["check", "@projects/minimal-trace.project"],
        expect: 0,
    },
    Case {
        args: &["check", "@projects/mars-satellite.project"],
        expect: 0,
    },
    Case {
        args: &["check", "@projects/one-gap.project"],
        expect: 1,
    },
    Case {
        args: &["check", "@projects/three-gaps.project"],
        expect: 1,
    },
    Case {
        args: &["check", "@projects/functional-clash.project"],
        expect: 1,
    },
    Case {
        args: &["check", "@projects/untyped-subject.project"],
        expect: 1,
    },
    Case {
        args: &[
            "check",
            "@projects/untyped-subject.project",
            "--mode",
            "infer",
        ],
        expect: 1,
    },
    Case {
        args: &["check", "@projects/dangling.project"],
        expect: 2,
    },
    Case {
        args: &["check", "@projects/bad-schema.project"],
        expect: 2,
    },
    Case {
        args: &["check", "@owx/fulfills-fragment.owx"],
        expect: 0,
    },
    Case {
        args: &["check", "@owx/broken.owx"],
        expect: 2,
    },
    Case {
        args: &["check", "@generated/kernel.owx"],
        expect: 0,
    },
    Case {
        args: &["check", "@projects/no-such-file.project"],
        expect: 2,
    },
    Case {
        args: &["check", "@projects/minimal-trace.project", "--mode", "lazy"],
        expect: 2,
    },
    Case {
        args: &["scenario", "automation", "--seed", "0"],
        expect: 0,
    },
    Case {
        args: &[
            "scenario",
            "distribution",
            "--n",
            "5",
            "--k",
            "2",
            "--seed",
            "42",
        ],
        expect: 0,
    },
    Case {
        args: &["scenario", "distribution", "--n", "3", "--k", "4"],
        expect: 2,
    },
    Case {
        args: &[
            "scenario",
            "self-evolution",
            "--project",
            "@projects/three-gaps.project",
        ],
        expect: 0,
    },
    Case {
        args: &[
            "scenario",
            "self-evolution",
            "--project",
            "@projects/three-gaps.project",
            "--limit",
            "2",
        ],
        expect: 1,
    },
    Case {
        args: &[
            "scenario",
            "self-evolution",
            "--project",
            "@projects/minimal-trace.project",
        ],
        expect: 0,
    },
    Case {
        args: &[
            "scenario",
            "self-evolution",
            "--project",
            "@projects/bad-schema.project",
        ],
        expect: 2,
    },
    Case {
        args: &["verify-fixtures", "@"],
        expect: 0,
    },
    Case {
        args: &["frobnicate"],
        expect: 2,
    },
];

pub fn expand(args: &[&str]) -> Vec<String> {
    args.iter()
        .map(|a| match a.strip_prefix('@') {
            Some(rel) => path_arg(&fixture(rel)),
            None => a.to_string(),
        })
        .collect()
}

/// (fixture project, mode, golden report) triples for `check --format structured`.
pub const REPORT_GOLDENS: &[(&str, &str, &str)] = &[
    ("minimal-trace", "strict", "check-minimal-trace"),
    ("one-gap", "strict", "check-one-gap"),
    ("functional-clash", "strict", "check-functional-clash"),
    ("untyped-subject", "strict", "check-untyped-subject"),
    ("untyped-subject", "infer", "check-untyped-subject-infer"),
    ("mars-satellite", "strict", "check-mars-satellite"),
];
