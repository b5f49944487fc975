//! Fixtures shared by the benchmarks: the production models with a matching
//! initial state.

use ghzsim_core::lindblad::Generator;
use ghzsim_core::scheme1::{self, Scheme1Params};
use ghzsim_core::scheme2::{self, ModelKind, Scheme2Params};
use ghzsim_core::{CMatrix, LevelScheme, MasterEq, C64};

pub struct Fixture {
    pub name: &'static str,
    pub model: MasterEq,
    pub rho: CMatrix,
}

impl Fixture {
    pub fn generator(&self) -> Generator {
        Generator::new(&self.model)
    }

    pub fn state(&self) -> Vec<C64> {
        self.rho.as_slice().to_vec()
    }
}

pub fn scheme1_full() -> Fixture {
    let model = scheme1::build_full_3atom(&Scheme1Params::fig2()).expect("fig2 model");
    let rho = scheme1::mixed_initial_state(3, &LevelScheme::ger()).expect("mixture");
    Fixture {
        name: "scheme1_full",
        model,
        rho,
    }
}

pub fn scheme1_effective() -> Fixture {
    let model = scheme1::build_effective(&Scheme1Params::fig2()).expect("effective model");
    let rho = scheme1::mixed_initial_state(3, &LevelScheme::gr()).expect("mixture");
    Fixture {
        name: "scheme1_effective",
        model,
        rho,
    }
}

pub fn scheme1_effective_5() -> Fixture {
    let model = scheme1::build_effective(&Scheme1Params::fig8()).expect("5-atom model");
    let rho = scheme1::mixed_initial_state(5, &LevelScheme::gr()).expect("mixture");
    Fixture {
        name: "scheme1_effective_5",
        model,
        rho,
    }
}

pub fn scheme2(kind: ModelKind) -> Fixture {
    let p = Scheme2Params::fig7();
    let (model, name) = match kind {
        ModelKind::Full => (scheme2::build_step_full(&p, 1), "scheme2_full"),
        ModelKind::Effective => (scheme2::build_step_effective(&p, 1), "scheme2_effective"),
    };
    Fixture {
        name,
        model: model.expect("scheme-2 model"),
        rho: scheme2::mixed_initial_state_6(),
    }
}

pub fn all() -> Vec<Fixture> {
    vec![
        scheme1_effective(),
        scheme1_effective_5(),
        scheme1_full(),
        scheme2(ModelKind::Effective),
        scheme2(ModelKind::Full),
    ]
}
