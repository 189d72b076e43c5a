#include <gtest/gtest.h>

#include "herm/catalog.hpp"
#include "herm/manifold_io.hpp"

using namespace herm;

namespace {

std::string fixture(const std::string& name) { return std::string(HERM_SOURCE_DIR) + "/tests/fixtures/" + name; }

InputError load_error(const std::string& src) {
  try {
    load_manifold(src);
  } catch (const InputError& e) {
    return e;
  }
  ADD_FAILURE() << src << " loaded without error";
  return InputError("", "");
}

}  // namespace

TEST(Io, CatalogEntriesLoad) {
  const auto names = catalog_names();
  EXPECT_EQ(names.size(), 7u);
  const HermitianManifold hopf = load_manifold("catalog:hopf");
  EXPECT_EQ(hopf.backend(), Backend::Chart);
  EXPECT_EQ(hopf.dimension(), 2);
  EXPECT_EQ(load_manifold("catalog:su2xr").backend(), Backend::Lie);
  EXPECT_EQ(load_manifold("catalog:iwasawa").dimension(), 3);
}

TEST(Io, UnknownCatalogEntry) {
  const InputError e = load_error("catalog:bad");
  EXPECT_NE(std::string(e.what()).find("unknown catalog entry"), std::string::npos);
}

TEST(Io, ShippedFilesMatchEmbeddedDocuments) {
  for (const auto& name : catalog_names()) {
    const auto file = read_json_file(std::string(HERM_SOURCE_DIR) + "/data/catalog/" + name + ".json");
    EXPECT_EQ(file, catalog_document(name)) << name;
    EXPECT_EQ(load_manifold(std::string(HERM_SOURCE_DIR) + "/data/catalog/" + name + ".json").name(), name);
  }
}

TEST(Io, NonHermitianMetricNamesEntries) {
  const InputError e = load_error(fixture("nonhermitian.json"));
  EXPECT_EQ(e.location(), "/metric");
  EXPECT_NE(std::string(e.what()).find("(1,2)/(2,1)"), std::string::npos) << e.what();
}

TEST(Io, NonHermitianLieMetric) {
  const InputError e = load_error(fixture("nonhermitian_h.json"));
  EXPECT_EQ(e.location().rfind("/h", 0), 0u) << e.location();
  EXPECT_NE(std::string(e.what()).find("(1,2)/(2,1)"), std::string::npos) << e.what();
}

TEST(Io, JacobiViolationReportsTriple) {
  const InputError e = load_error(fixture("jacobi_violation.json"));
  const std::string what = e.what();
  EXPECT_NE(what.find("Jacobi identity violated"), std::string::npos) << what;
  EXPECT_NE(what.find("residual 0.3"), std::string::npos) << what;
  EXPECT_NE(what.find("worst triple"), std::string::npos) << what;
}

TEST(Io, SyntaxErrorIsLocated) {
  const InputError e = load_error(fixture("bad_syntax.json"));
  EXPECT_EQ(e.location(), "/metric/0/0");
}

TEST(Io, MissingFieldIsLocated) {
  const InputError e = load_error(fixture("missing_field.json"));
  EXPECT_EQ(e.location(), "/metric");
  EXPECT_NE(std::string(e.what()).find("missing required field"), std::string::npos);
}

TEST(Io, TruncatedFileIsReported) {
  const InputError e = load_error(fixture("truncated.json"));
  EXPECT_NE(std::string(e.what()).find("invalid JSON"), std::string::npos);
}

TEST(Io, NonPositiveMetricAtDeclaredPoint) {
  const InputError e = load_error(fixture("not_positive.json"));
  EXPECT_EQ(e.location(), "/sample_points/0");
}

TEST(Io, MissingFile) {
  const InputError e = load_error(fixture("does_not_exist.json"));
  EXPECT_NE(std::string(e.what()).find("cannot open"), std::string::npos);
}

TEST(Io, ComplexRoundTrip) {
  const Complex z(0.25, -3.5);
  EXPECT_EQ(complex_from_json(complex_to_json(z), "/x"), z);
  EXPECT_EQ(complex_from_json(nlohmann::json(2.0), "/x"), Complex(2, 0));
  EXPECT_THROW(complex_from_json(nlohmann::json("2"), "/x"), InputError);
}
