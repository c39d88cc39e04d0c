#pragma once

// Everything in one include.
#include <halfdisk/adjunction.hpp>
#include <halfdisk/cauchy_green.hpp>
#include <halfdisk/comparison.hpp>
#include <halfdisk/errors.hpp>
#include <halfdisk/grid.hpp>
#include <halfdisk/intersection.hpp>
#include <halfdisk/normal_form.hpp>
#include <halfdisk/polynomial.hpp>
#include <halfdisk/scalar.hpp>
#include <halfdisk/series.hpp>
#include <halfdisk/solver.hpp>
#include <halfdisk/structures.hpp>
