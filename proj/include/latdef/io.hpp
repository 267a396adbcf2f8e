#pragma once

// JSON and CSV interchange formats.
//
//   frame   {origin:[x,y], basis:[[.,.],[.,.]]}
//   gamma   {A:[[int,int],[int,int]], b:[int,int]}
//   region  {outer:{min:[x,y], max:[x,y]}, punctures:[{center:[x,y], radius:r}]}
//   loop    {points:[[x,y],...]}  or  {circle:{center:[x,y], radius:r, turns:int, samples:int}}
//   spec    {region:..., charges:[{center, a:[re,im], b, c, d}],
//            w2:[{center, coeff:[re,im], order:int, conjugated:bool}]}
//
// A spec without a "w2" key gets the identity background w2 = z; an explicit
// empty list means no background. Parse failures throw InputError.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "latdef/coframe.hpp"
#include "latdef/defect_field.hpp"
#include "latdef/geometry.hpp"
#include "latdef/holonomy.hpp"
#include "latdef/lattice_space.hpp"
#include "latdef/region.hpp"

namespace latdef::io {

using Json = nlohmann::ordered_json;

Json to_json(const AffineFrame& frame);
Json to_json(const GammaElement& g);
Json to_json(const Region& region);
Json to_json(const Loop& loop);
Json to_json(const FieldSpec& spec);
Json to_json(const CenteredAffine& h);
Json to_json(const ReducedBasis& rb);
Json to_json(const TorsionField& t);
Json to_json(const CompatibilityReport& r);
Json to_json(const ConnectionComparison& r);
Json to_json(const ConvergenceStudy& s);

AffineFrame frame_from_json(const Json& j);
GammaElement gamma_from_json(const Json& j);
Region region_from_json(const Json& j);
Loop loop_from_json(const Json& j);
FieldSpec spec_from_json(const Json& j);

// {loop, windings, elements, numeric:{jump_w, jump_J}, residual, verified}
Json holonomy_report(const Json& loop_description, const HolonomyVerification& v);

Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

// Fixed formatting used by every text output: shortest round-trip form.
std::string format_number(double v);

// x,y,re_w,im_w,J11,J12,J21,J22,detJ for every node kept by the grid.
void write_field_csv(std::ostream& out, const FieldSpec& spec, const SampledGrid& grid,
                     const BranchState& branch = {});

// x,y,t11,t12,t21,t22,valid,cut_flags for every node of the grid.
void write_coframe_csv(std::ostream& out, const CoframeField& field);
// Rebuilds the grid from the coordinates; missing nodes become invalid.
CoframeField read_coframe_csv(std::istream& in);
CoframeField read_coframe_csv_file(const std::string& path);

}  // namespace latdef::io
