// Umbrella header
#pragma once

#include <pendulum_vib/contour.hpp>
#include <pendulum_vib/dynamics.hpp>
#include <pendulum_vib/errors.hpp>
#include <pendulum_vib/excitation.hpp>
#include <pendulum_vib/integrator.hpp>
#include <pendulum_vib/params.hpp>
#include <pendulum_vib/portrait.hpp>
#include <pendulum_vib/potential.hpp>
