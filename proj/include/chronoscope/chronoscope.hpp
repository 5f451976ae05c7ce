#ifndef CHRONOSCOPE_CHRONOSCOPE_HPP
#define CHRONOSCOPE_CHRONOSCOPE_HPP

// Umbrella header: the whole library in one include.

#include "chronoscope/cli.hpp"
#include "chronoscope/csv.hpp"
#include "chronoscope/elements.hpp"
#include "chronoscope/envelope.hpp"
#include "chronoscope/errors.hpp"
#include "chronoscope/hom.hpp"
#include "chronoscope/spdc.hpp"
#include "chronoscope/telescope.hpp"
#include "chronoscope/units.hpp"

#endif  // CHRONOSCOPE_CHRONOSCOPE_HPP
