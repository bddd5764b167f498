"""HTTP service exposing the solver, validator, costing and generators."""
