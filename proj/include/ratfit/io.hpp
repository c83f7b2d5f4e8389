// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ratfit/optimizer.hpp"
#include "ratfit/types.hpp"

namespace ratfit
{

// CSV sample files: header "z_re,z_im,f_re,f_im" followed by one row per
// sample. Parsing reports malformed rows and duplicate points by line number.
SampleSet read_samples_csv(std::istream &in);
SampleSet read_samples_csv(const std::string &path);
void write_samples_csv(std::ostream &out, const SampleSet &samples);
void write_samples_csv(const std::string &path, const SampleSet &samples);

// One positive real per line.
RVector read_weight_file(const std::string &path);

nlohmann::json report_to_json(const FitReport &report);
nlohmann::json model_to_json(const PolyRatio &r);
nlohmann::json model_to_json(const PartialFraction &r);
nlohmann::json model_to_json(const BarycentricRational &r);
nlohmann::json outcome_to_json(const FitOutcome &outcome);

// Flat key,value rows (CSV) with the same fields as the JSON report.
std::string report_to_csv(const FitReport &report);

} // namespace ratfit
