#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "bef4llm/model.hpp"
#include "bef4llm/pragmatic.hpp"
#include "bef4llm/scoring.hpp"
#include "bef4llm/semantic.hpp"
#include "bef4llm/syntactic.hpp"
#include "bef4llm/validity.hpp"

namespace {

std::string read_fixture(const char* name) {
  std::ifstream in(std::string(BEF_FIXTURE_DIR) + "/" + name,
                   std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::string& m1_xml() {
  static const std::string xml = read_fixture("M1.bpmn");
  return xml;
}

void BM_Validate(benchmark::State& state) {
  const std::string& xml = m1_xml();
  for (auto _ : state)
    benchmark::DoNotOptimize(bef::validate(xml));
}
BENCHMARK(BM_Validate);

void BM_ParseModel(benchmark::State& state) {
  const std::string& xml = m1_xml();
  for (auto _ : state)
    benchmark::DoNotOptimize(bef::parse_model(xml));
}
BENCHMARK(BM_ParseModel);

void BM_SyntacticDimension(benchmark::State& state) {
  const bef::ProcessModel model = bef::parse_model(m1_xml());
  for (auto _ : state)
    benchmark::DoNotOptimize(bef::syntactic_dimension(model));
}
BENCHMARK(BM_SyntacticDimension);

void BM_PragmaticDimension(benchmark::State& state) {
  const bef::ProcessModel model = bef::parse_model(m1_xml());
  const bef::ThresholdTable table = bef::ThresholdTable::bundled();
  for (auto _ : state)
    benchmark::DoNotOptimize(bef::pragmatic_dimension(model, table));
}
BENCHMARK(BM_PragmaticDimension);

void BM_SemanticDimension(benchmark::State& state) {
  const bef::ProcessModel model = bef::parse_model(m1_xml());
  const bef::SemanticConfig config;
  for (auto _ : state)
    benchmark::DoNotOptimize(bef::semantic_dimension(model, model, config));
}
BENCHMARK(BM_SemanticDimension);

void BM_FullEvaluation(benchmark::State& state) {
  const bef::ProcessModel truth = bef::parse_model(m1_xml());
  const bef::ThresholdTable table = bef::ThresholdTable::bundled();
  const bef::SemanticConfig config;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bef::evaluate_sample(m1_xml(), truth, table, config));
}
BENCHMARK(BM_FullEvaluation);

}  // namespace

BENCHMARK_MAIN();
