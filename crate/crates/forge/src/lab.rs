//! Per-entry computation state: the group and its bundles, built on demand.

use std::sync::Arc;
use std::time::{Duration, Instant};

use forge_core::rocco::{nu_group, NuBundle};
use forge_core::weakcomm::{xp_group, BuildOptions, XpBundle};
use forge_core::{
    Clock, Enumeration, EnumerationLimits, FiniteGroup, Presentation, Result, Strategy,
};

#[derive(Clone, Debug)]
pub struct Settings {
    pub max_cosets: usize,
    pub max_time: Option<Duration>,
    pub strategy: Strategy,
    /// Draws per direction when Im ρ is sampled.
    pub samples: usize,
    pub seed: u64,
    /// Include wall-clock fields in reports.
    pub timing: bool,
    /// Largest group handed to the bar-resolution oracle.
    pub bar_bound: usize,
    /// Largest 𝔛/R for the stem quotient test.
    pub stem_bound: usize,
    /// Largest P for which both ν relator scopes are enumerated directly.
    pub scope_check_bound: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            max_cosets: EnumerationLimits::default().max_cosets,
            max_time: None,
            strategy: Strategy::Hlt,
            samples: forge_core::products::DEFAULT_SAMPLES,
            seed: 0x5eed,
            timing: true,
            bar_bound: forge_core::homology::H2_BAR_BOUND,
            stem_bound: 32,
            scope_check_bound: 16,
        }
    }
}

impl Settings {
    pub fn limits(&self) -> EnumerationLimits {
        EnumerationLimits {
            max_cosets: self.max_cosets,
            max_time: self.max_time,
        }
    }
}

/// Wall clock started when the entry begins.
#[derive(Debug)]
pub struct StdClock(Instant);

impl StdClock {
    pub fn start() -> Self {
        StdClock(Instant::now())
    }
}

impl Clock for StdClock {
    fn elapsed(&self) -> Duration {
        self.0.elapsed()
    }
}

pub struct Lab<'a> {
    pub settings: &'a Settings,
    presentation: Presentation,
    clock: StdClock,
    group: Option<Arc<FiniteGroup>>,
    xp: Option<Arc<XpBundle>>,
    nu: Option<Arc<NuBundle>>,
}

impl<'a> Lab<'a> {
    pub fn new(presentation: Presentation, settings: &'a Settings) -> Self {
        Lab {
            settings,
            presentation,
            clock: StdClock::start(),
            group: None,
            xp: None,
            nu: None,
        }
    }

    pub fn elapsed(&self) -> Duration {
        self.clock.elapsed()
    }

    pub fn options(&self) -> BuildOptions<'_> {
        BuildOptions {
            limits: self.settings.limits(),
            strategy: self.settings.strategy,
            clock: Some(&self.clock),
            ..Default::default()
        }
    }

    pub fn group(&mut self) -> Result<Arc<FiniteGroup>> {
        if let Some(g) = &self.group {
            return Ok(g.clone());
        }
        let t = Enumeration::new(&self.presentation, &[])
            .limits(self.settings.limits())
            .strategy(self.settings.strategy)
            .clock(&self.clock)
            .run()?;
        let g = Arc::new(FiniteGroup::regular_representation(&self.presentation, &t)?);
        self.group = Some(g.clone());
        Ok(g)
    }

    pub fn xp(&mut self) -> Result<Arc<XpBundle>> {
        if let Some(b) = &self.xp {
            return Ok(b.clone());
        }
        let g = self.group()?;
        let b = Arc::new(xp_group(&g, &self.options())?);
        self.xp = Some(b.clone());
        Ok(b)
    }

    pub fn nu(&mut self) -> Result<Arc<NuBundle>> {
        if let Some(b) = &self.nu {
            return Ok(b.clone());
        }
        let g = self.group()?;
        let b = Arc::new(nu_group(&g, &self.options())?);
        self.nu = Some(b.clone());
        Ok(b)
    }
}
