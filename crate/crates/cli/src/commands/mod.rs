pub mod compare;
pub mod solve;
pub mod verify;

use std::path::PathBuf;

use crate::config::RunConfig;

pub const DEFAULT_OUT_DIR: &str = "fwdis-out";

fn out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}
