#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "katka/collection.hpp"
#include "katka/digester.hpp"
#include "katka/error.hpp"
#include "katka/evaluator.hpp"
#include "katka/fm_index.hpp"
#include "katka/kernelizer.hpp"
#include "katka/mem_finder.hpp"

namespace py = pybind11;
using namespace katka;

namespace {

GenomeCollection collection_of(const std::vector<std::string>& genomes) {
    std::string joined;
    for (const auto& g : genomes) joined += g + "\n";
    ParseOptions o;
    o.format = InputFormat::lines;
    return parse_collection_string(joined, o);
}

py::list mem_rows(const AugmentedFmIndex& ix, const std::string& read, std::size_t min_mem) {
    const Text q = query_symbols(ix, read);
    py::list rows;
    for (const auto& r : compute_mem_table(ix, q, {min_mem}).records) {
        py::dict d;
        d["read_start"] = r.read_start;
        d["length"] = r.length;
        d["mem"] = mem_string(ix, q, r);
        d["empty"] = r.empty;
        if (r.empty) {
            d["first_pos"] = py::none();
            d["last_pos"] = py::none();
            d["first_genome"] = py::none();
            d["last_genome"] = py::none();
        } else {
            d["first_pos"] = r.first_pos;
            d["last_pos"] = r.last_pos;
            d["first_genome"] = r.first_genome;
            d["last_genome"] = r.last_genome;
        }
        rows.append(d);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lossy augmented FM-indexes over genome collections";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

    py::class_<AugmentedFmIndex>(m, "Index")
        .def_property_readonly("rows", &AugmentedFmIndex::size)
        .def_property_readonly("text_length", &AugmentedFmIndex::text_length)
        .def_property_readonly("genome_count", &AugmentedFmIndex::genome_count)
        .def_property_readonly("provenance", [](const AugmentedFmIndex& ix) { return ix.provenance().describe(); })
        .def("sa", [](const AugmentedFmIndex& ix) { return std::vector<Pos>(ix.sa().begin(), ix.sa().end()); })
        .def("lcp", [](const AugmentedFmIndex& ix) { return std::vector<Pos>(ix.lcp().begin(), ix.lcp().end()); })
        .def("query", &mem_rows, py::arg("read"), py::arg("min_mem") = 1,
             "MEM table of a read as a list of dicts")
        .def("serialize", [](const AugmentedFmIndex& ix) {
            const auto bytes = ix.serialize();
            return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        })
        .def("save", &AugmentedFmIndex::save)
        .def_static("load", &AugmentedFmIndex::load)
        .def_static("deserialize", [](const py::bytes& b) {
            const std::string s = b;
            return AugmentedFmIndex::deserialize(
                std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
        });

    m.def(
        "build_index",
        [](const std::vector<std::string>& genomes, const std::string& variant) {
            return build_variant_index(collection_of(genomes), VariantConfig::parse(variant));
        },
        py::arg("genomes"), py::arg("variant") = "raw",
        "Index over genomes; variant is raw, kernel:KMAX, digest:K:W or digest-kernel:K:W:KMAX");

    m.def(
        "variant_text",
        [](const std::vector<std::string>& genomes, const std::string& variant) {
            const auto v = VariantConfig::parse(variant);
            const Text t = variant_text(collection_of(genomes), v);
            if (!v.provenance().is_digest()) return render_nucleotides(t);
            return v.digest.k == 3 ? render_ascii(t, 3) : render_values(t);
        },
        py::arg("genomes"), py::arg("variant"));

    m.def(
        "read_collection",
        [](const std::string& path, bool allow_n) {
            ParseOptions o;
            o.allow_n = allow_n;
            const auto c = read_collection_file(path, o);
            return std::make_pair(c.names, c.genomes);
        },
        py::arg("path"), py::arg("allow_n") = false, "(names, genomes) of a FASTA or one-per-line file");

    m.def(
        "classify_range",
        [](std::optional<std::pair<std::size_t, std::size_t>> range, std::size_t genome) {
            return std::string(to_string(classify_range(range ? GenomeRange::of(range->first, range->second)
                                                              : GenomeRange::none(),
                                                        genome)));
        },
        py::arg("range"), py::arg("genome"));

    m.def(
        "evaluate",
        [](const std::vector<std::string>& genomes, const std::vector<std::string>& variants, std::size_t read_len,
           double mut_rate, std::size_t reads_per_genome, std::uint64_t seed, bool timing) {
            std::vector<VariantConfig> vs;
            for (const auto& v : variants) vs.push_back(VariantConfig::parse(v));
            py::gil_scoped_release release;
            return run_experiment(collection_of(genomes), nullptr, vs, {read_len, mut_rate, reads_per_genome, seed})
                .to_json(timing);
        },
        py::arg("genomes"), py::arg("variants"), py::arg("read_len") = 200, py::arg("mut_rate") = 0.01,
        py::arg("reads_per_genome") = 500, py::arg("seed") = 1, py::arg("timing") = true,
        "JSON evaluation report");

    m.def(
        "synthesize",
        [](std::size_t genomes, std::size_t length, double divergence, std::size_t island, std::uint64_t seed) {
            return synthesize_collection({genomes, length, divergence, island, seed}).genomes;
        },
        py::arg("genomes") = 50, py::arg("length") = 10000, py::arg("divergence") = 0.10, py::arg("island") = 300,
        py::arg("seed") = 7);

}
