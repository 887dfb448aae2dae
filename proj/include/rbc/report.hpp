#pragma once

// JSON encodings used by reports. Complex numbers are [re, im]; matrices are
// arrays of rows; curvature tensors nest in index order (i, j, k, l).

#include <rbc/certify.hpp>
#include <rbc/curvature.hpp>
#include <rbc/sampling.hpp>
#include <rbc/schwarz.hpp>

#include <json.hpp>

namespace rbc {

using Json = nlohmann::ordered_json;

Json to_json(cplx z);
Json to_json(const Vector& v);
Json to_json(const RealVector& v);
Json to_json(const Matrix& m);
Json tensor_json(const ChernTensor& t);

Json convention_block();

Json to_json(const SymmetryReport& r);
Json to_json(const RicciTriple& r);
Json to_json(const Verdict& v);
Json to_json(const ScanResult& s);
Json to_json(const ConstantRbcReport& r);
Json to_json(const MomentEstimate& e);
Json to_json(const BergerReport& r);
Json to_json(const SchwarzReport& r);
Json to_json(const SupBoundReport& r);

cplx complex_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

} // namespace rbc
