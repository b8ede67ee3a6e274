use std::f64::consts::{PI, SQRT_2};

use super::config::{pair, RunConfig, SystemKind, TimeUnit};
use crate::entropy::ConjugatePair;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> RunConfig,
}

impl Preset {
    pub fn config(&self) -> RunConfig {
        (self.build)()
    }
}

fn blank(system: SystemKind) -> RunConfig {
    RunConfig {
        system,
        m: None,
        omega: None,
        hbar: None,
        length: None,
        n_min: None,
        n_max: None,
        x0: 0.0,
        p0: 0.0,
        sigma: 1.0,
        t_start: 0.0,
        t_end: 1.0,
        time_unit: TimeUnit::Absolute,
        samples: 2,
        pairs: Vec::new(),
        components: false,
        window: None,
        prominence: None,
        smoothing: None,
        q_max: None,
        tolerance: None,
    }
}

/// Packet centred in the unit well at n0 = 400, followed over just past
/// half a revival.
fn well(sigma: f64, pairs: Vec<ConjugatePair>) -> RunConfig {
    RunConfig {
        x0: 0.5,
        p0: 400.0 * PI,
        sigma,
        t_end: 0.53,
        time_unit: TimeUnit::Revival,
        samples: 3000,
        pairs,
        ..blank(SystemKind::Well)
    }
}

fn sho(sigma: f64) -> RunConfig {
    RunConfig {
        x0: 2.0,
        sigma,
        t_end: 3.0,
        time_unit: TimeUnit::Classical,
        samples: 600,
        pairs: sho_pairs(),
        ..blank(SystemKind::Sho)
    }
}

fn sho_pairs() -> Vec<ConjugatePair> {
    vec![
        pair("1", "1"),
        pair("2", "2/3"),
        pair("1/2", "inf"),
        pair("inf", "1/2"),
    ]
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "well-fig1",
        description: "well, sigma = sqrt(2)/20, n0 = 400, pair (2/3, 2), 0 to 0.53 T_rev",
        build: || well(SQRT_2 / 20.0, vec![pair("2/3", "2")]),
    },
    Preset {
        name: "well-fig1-wide",
        description: "as well-fig1 with sigma = sqrt(2)/10",
        build: || well(SQRT_2 / 10.0, vec![pair("2/3", "2")]),
    },
    Preset {
        name: "well-fig2",
        description: "well, pairs (1, 1), (2, 2/3), (1/2, inf)",
        build: || {
            well(
                SQRT_2 / 20.0,
                vec![pair("1", "1"), pair("2", "2/3"), pair("1/2", "inf")],
            )
        },
    },
    Preset {
        name: "well-fig3",
        description: "well, pair (inf, 1/2) with position and momentum entropies",
        build: || RunConfig {
            components: true,
            ..well(SQRT_2 / 20.0, vec![pair("inf", "1/2")])
        },
    },
    Preset {
        name: "bouncer-fig4",
        description:
            "bouncer, z0 = 100, sigma = 1, pairs (2, 2/3), (inf, 1/2), dt = 2.5 to 1.05 T_rev",
        build: || RunConfig {
            x0: 100.0,
            sigma: 1.0,
            t_end: 13367.5,
            samples: 5348,
            pairs: vec![pair("2", "2/3"), pair("inf", "1/2")],
            ..blank(SystemKind::Bouncer)
        },
    },
    Preset {
        name: "sho-coherent",
        description: "oscillator, coherent packet at x0 = 2, three periods",
        build: || sho(1.0),
    },
    Preset {
        name: "sho-squeezed",
        description: "oscillator, sigma = 2 at x0 = 2, three periods",
        build: || sho(2.0),
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
