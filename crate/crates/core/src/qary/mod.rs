//! Q-ary multilevel lifting of deterministic schemes onto the real channel.

mod config;
mod lift;
mod modem;
mod sim;

pub use config::QaryConfig;
pub use lift::{
    lift_default, lift_scheme, lift_scheme_field, lifted_channel, LiftedRun, LiftedScheme, NoiselessReport,
};
pub use modem::{demodulate, demodulate_split, digits_of, modulate, modulate_int, receive, DigitVector};
pub use sim::{run_monte_carlo, wilson_upper, LevelStat, SimReport, SHARD_TRIALS};
