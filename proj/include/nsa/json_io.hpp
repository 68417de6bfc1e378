#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "nsa/filters.hpp"
#include "nsa/hyperrational.hpp"
#include "nsa/simplelang.hpp"
#include "nsa/ultrapower_seq.hpp"

namespace nsa::io {

using Json = nlohmann::ordered_json;

/// Accepts "p/q" strings and JSON integers. ParseError otherwise.
Rational rational_of(const Json& j);
Json rational_json(const Rational& r);

/// {"num":[[e,c],...],"den":[[e,c],...],"int":bool}
Json hyper_json(const HyperRational& x);

/// {"mod":k,"res":[...],"add":[...],"rem":[...]}
Json epset_json(const filters::EPSet& s);
filters::EPSet epset_of(const Json& j);

/// {"mod":k,"pieces":[{"res":r,"num":[c0,...],"den":[...]}],"exc":[[n,"p/q"],...]}
seq::SequenceReal sequence_of(const Json& j);
Json sequence_json(const seq::SequenceReal& s);

/// [{"lo":"0","hi":"1","loOpen":true,"hiOpen":true}], a missing or null end is unbounded.
seq::IntervalUnion interval_union_of(const Json& j);
Json interval_union_json(const seq::IntervalUnion& a);
/// The same layout with hyperrational expressions as endpoints ("w", "w - 1", ...).
std::vector<HInterval> hyper_intervals_of(const Json& j);

/// {"levels":[set,...],"rule":{"lo":bi,"hi":bi,"loOpen":b,"hiOpen":b}} where a set is
/// {"mod":k,"classes":[{"lo":rf,"hi":rf,"loOpen":b,"hiOpen":b}],"exc":[[i,interval],...]},
/// rf is {"num":[...],"den":[...]} in n and bi is {"num":[[[e_n,e_i],c],...],"den":[...]}.
seq::Chain chain_of(const Json& j);

/// {"elements":[...],"relations":{"R":{"arity":k,"tuples":[[...],...]}},
///  "functions":{"f":{"arity":k,"graph":[[[args...],value],...]}},"constants":{"c":"a"}}
/// or {"numeric":["0","1/2",...]} for the rational comparison system.
simple::FiniteSystem system_of(const Json& j);

/// Inline JSON when the text starts with '{' or '[', otherwise a file name.
Json load(const std::string& text_or_path);

}  // namespace nsa::io
