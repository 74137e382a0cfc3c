// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// JSON and CSV serialization of result types, plus atomic file output.
// JSON numbers use the shortest round-trip form; CSV uses %.17g. Non-finite
// values are written as the strings "inf", "-inf" and "nan".

#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "berezin/analysis.hpp"
#include "berezin/berezin.hpp"
#include "berezin/operators.hpp"
#include "berezin/symbols.hpp"

namespace berezin::report {

using Json = nlohmann::ordered_json;

Json number(double v);
std::string format_double(double v);
std::string hex64(std::uint64_t v);

Json to_json(const GridExtent& extent);
Json to_json(const QuadGrid& grid);
Json to_json(const SignalLattice& lattice);
Json to_json(const FrameFamily& F);
Json to_json(const DecayReport& r);
Json to_json(const BerezinProfile& p);
Json to_json(const SpectrumReport& s);
Json to_json(const UncertaintyResult& u);
Json to_json(const SupResult& s);
Json to_json(const GroupElement& h);

/// Two columns (parameter, value); extra series become further columns.
std::string to_csv(const DecayReport& r);
/// (r, envelope).
std::string to_csv(const BerezinProfile& p);
/// (index, eigenvalue) or (index, singular_value).
std::string to_csv(const SpectrumReport& s);

/// Writes to path + ".tmp" and renames over path. Throws ResourceError on I/O failure.
void write_atomic(const std::string& path, const std::string& content);

/// FNV-1a 64 over a byte string.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace berezin::report
