#include "dpfbmc/campaign.hpp"
#include "dpfbmc/filters.hpp"
#include "dpfbmc/mapping.hpp"
#include "dpfbmc/metrics.hpp"
#include "dpfbmc/modem.hpp"
#include "dpfbmc/polarization.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <stdexcept>

namespace py = pybind11;
using namespace dpfbmc;

namespace {

using CArray = py::array_t<cdouble, py::array::c_style | py::array::forcecast>;
using RArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <typename T>
py::array_t<T> to_numpy(const std::vector<T>& v)
{
    py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

template <typename T>
py::array_t<T> to_numpy_2d(const std::vector<T>& v, std::size_t rows, std::size_t cols)
{
    py::array_t<T> out({static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<cdouble> to_vector(const CArray& x)
{
    if (x.ndim() != 1)
        throw std::invalid_argument("expected a 1-D complex array");
    return {x.data(), x.data() + x.size()};
}

OqamGrid to_oqam(const RArray& a)
{
    if (a.ndim() != 2)
        throw std::invalid_argument("expected a 2-D real array indexed [n, m]");
    OqamGrid g(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), g.a.begin());
    return g;
}

QamGrid to_qam(const CArray& d)
{
    if (d.ndim() != 2)
        throw std::invalid_argument("expected a 2-D complex array indexed [n, l]");
    QamGrid g(static_cast<std::size_t>(d.shape(0)), static_cast<std::size_t>(d.shape(1)));
    std::copy(d.data(), d.data() + d.size(), g.d.begin());
    return g;
}

// Geometry travels with the filter on the Python side; the signal is a bare array.
BasebandSignal to_signal(const CArray& x, std::size_t subcarriers, std::size_t overlap, std::size_t oversample = 1)
{
    BasebandSignal s;
    s.samples = to_vector(x);
    s.subcarriers = subcarriers;
    s.overlap = overlap;
    s.oversample = oversample;
    return s;
}

Structure parse_structure(const std::string& s)
{
    if (s == "s1" || s == "dp_s1")
        return Structure::S1Tpdm;
    if (s == "s2" || s == "dp_s2")
        return Structure::S2Fpdm;
    if (s == "s3" || s == "dp_s3")
        return Structure::S3Tfpdm;
    throw std::invalid_argument("unknown structure '" + s + "' (s1, s2, s3)");
}

ParityMask parse_mask(const std::string& s)
{
    if (s == "all")
        return ParityMask::All;
    if (s == "even")
        return ParityMask::EvenOnly;
    throw std::invalid_argument("unknown mask '" + s + "' (all, even)");
}

ScenarioConfig to_config(const std::map<std::string, py::object>& settings)
{
    ScenarioConfig cfg;
    for (const auto& [k, v] : settings) {
        std::string text = py::str(v);
        if (py::isinstance<py::bool_>(v))
            text = v.cast<bool>() ? "true" : "false";
        apply_setting(cfg, k, text);
    }
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "CP-OFDM, FBMC/OQAM and dual-polarization FBMC waveforms with PAPR and spectrum metrics";

    py::register_exception<std::invalid_argument>(m, "ConfigError", PyExc_ValueError);

    py::class_<PrototypeFilter>(m, "PrototypeFilter")
        .def_property_readonly("kind", [](const PrototypeFilter& h) { return std::string(to_string(h.kind)); })
        .def_readonly("samples_per_symbol", &PrototypeFilter::samples_per_symbol)
        .def_readonly("overlap", &PrototypeFilter::overlap)
        .def_readonly("rolloff", &PrototypeFilter::rolloff)
        .def_property_readonly("coeffs", [](const PrototypeFilter& h) { return to_numpy(h.coeffs); })
        .def("energy", &PrototypeFilter::energy)
        .def("symmetry_center", &PrototypeFilter::symmetry_center)
        .def("__len__", &PrototypeFilter::length)
        .def("__repr__", [](const PrototypeFilter& h) {
            return "<PrototypeFilter " + std::string(to_string(h.kind)) + " N=" +
                   std::to_string(h.samples_per_symbol) + " K=" + std::to_string(h.overlap) + ">";
        });

    m.def("design_srrc", &design_srrc, py::arg("n"), py::arg("overlap"), py::arg("rolloff"));
    m.def("design_phydyas", &design_phydyas, py::arg("n"), py::arg("overlap"));
    m.def("design_rect", &design_rect, py::arg("n"));
    m.def("phydyas_frequency_coefficients", [](std::size_t k) { return to_numpy(phydyas_frequency_coefficients(k)); },
          py::arg("overlap"));
    m.def("max_sidelobe_ratio", &max_sidelobe_ratio);
    m.def("symmetry_error", &symmetry_error);

    m.def("qam_constellation", [](unsigned order) { return to_numpy(qam_constellation(order)); }, py::arg("order"));
    m.def(
        "random_qam_grid",
        [](std::size_t n, std::size_t symbols, unsigned order, std::uint64_t seed) {
            const auto g = random_qam_grid(n, symbols, order, seed);
            return to_numpy_2d(g.d, g.subcarriers, g.symbols);
        },
        py::arg("n"), py::arg("symbols"), py::arg("order") = 16, py::arg("seed") = 1);
    m.def(
        "oqam_stagger",
        [](const CArray& d) {
            const auto a = oqam_stagger(to_qam(d));
            return to_numpy_2d(a.a, a.subcarriers, a.symbols);
        },
        py::arg("d"));
    m.def(
        "oqam_destagger",
        [](const RArray& a) {
            const auto d = oqam_destagger(to_oqam(a));
            return to_numpy_2d(d.d, d.subcarriers, d.symbols);
        },
        py::arg("a"));
    m.def("phase_rotor", &phase_rotor, py::arg("n"), py::arg("m"));

    m.def(
        "synthesize",
        [](const RArray& a, const PrototypeFilter& h, const std::string& method) {
            const auto g = to_oqam(a);
            if (method == "ppn")
                return to_numpy(synthesize_ppn(g, h).samples);
            if (method == "direct")
                return to_numpy(synthesize_direct(g, h).samples);
            throw std::invalid_argument("method must be 'ppn' or 'direct'");
        },
        py::arg("a"), py::arg("filter"), py::arg("method") = "ppn");
    m.def(
        "demodulate",
        [](const CArray& x, const PrototypeFilter& h, std::size_t subcarriers, std::size_t symbols,
           bool complex_output) -> py::object {
            const auto s = to_signal(x, subcarriers, h.overlap, h.samples_per_symbol / subcarriers);
            if (complex_output) {
                const auto c = demodulate_complex(s, h, subcarriers, symbols);
                return to_numpy_2d(c.v, c.subcarriers, c.symbols);
            }
            const auto r = demodulate(s, h, subcarriers, symbols);
            return to_numpy_2d(r.a, r.subcarriers, r.symbols);
        },
        py::arg("x"), py::arg("filter"), py::arg("subcarriers"), py::arg("symbols"), py::arg("complex_output") = false);
    m.def(
        "multiplex",
        [](const RArray& a, const std::string& structure) {
            auto [h, v] = multiplex(to_oqam(a), parse_structure(structure));
            return py::make_tuple(to_numpy_2d(h.a, h.subcarriers, h.symbols), to_numpy_2d(v.a, v.subcarriers, v.symbols));
        },
        py::arg("a"), py::arg("structure"));
    m.def(
        "synthesize_dp",
        [](const RArray& a, const PrototypeFilter& h, const std::string& structure) {
            const auto f = synthesize_dp(to_oqam(a), h, parse_structure(structure));
            return py::make_tuple(to_numpy(f.h_signal.samples), to_numpy(f.v_signal.samples));
        },
        py::arg("a"), py::arg("filter"), py::arg("structure"));
    m.def(
        "cp_ofdm_modulate",
        [](const CArray& d, std::size_t cp_len, std::size_t window_len, std::size_t oversample) {
            return to_numpy(cp_ofdm_modulate(to_qam(d), cp_len, window_len, oversample).samples);
        },
        py::arg("d"), py::arg("cp_len"), py::arg("window_len") = 0, py::arg("oversample") = 1);

    m.def(
        "papr_windows",
        [](const CArray& x, std::size_t win) {
            const auto v = to_vector(x);
            return to_numpy(papr_windows(std::span<const cdouble>(v), win));
        },
        py::arg("x"), py::arg("window"));
    m.def(
        "empirical_ccdf",
        [](const RArray& papr, const RArray& gamma_db) {
            const std::span<const double> p(papr.data(), static_cast<std::size_t>(papr.size()));
            const std::span<const double> g(gamma_db.data(), static_cast<std::size_t>(gamma_db.size()));
            return to_numpy(empirical_ccdf(p, g).prob);
        },
        py::arg("papr"), py::arg("gamma_db"));
    m.def(
        "analytic_alpha",
        [](const PrototypeFilter& h, std::size_t subcarriers, const std::string& mask) {
            return to_numpy(analytic_alpha(h, subcarriers, parse_mask(mask)).alpha);
        },
        py::arg("filter"), py::arg("subcarriers"), py::arg("mask") = "all");
    m.def(
        "analytic_ccdf",
        [](const PrototypeFilter& h, std::size_t subcarriers, const RArray& gamma_db, const std::string& mask) {
            const auto model = analytic_alpha(h, subcarriers, parse_mask(mask));
            const std::span<const double> g(gamma_db.data(), static_cast<std::size_t>(gamma_db.size()));
            return to_numpy(analytic_ccdf(model, g).prob);
        },
        py::arg("filter"), py::arg("subcarriers"), py::arg("gamma_db"), py::arg("mask") = "all");
    m.def("classical_ofdm_ccdf", &classical_ofdm_ccdf, py::arg("subcarriers"), py::arg("gamma"));
    m.def(
        "truncate_tails",
        [](const CArray& x, std::size_t samples_per_symbol, std::size_t overlap) {
            return to_numpy(truncate_tails(to_signal(x, samples_per_symbol, overlap)).samples);
        },
        py::arg("x"), py::arg("samples_per_symbol"), py::arg("overlap"));
    m.def(
        "welch_psd",
        [](const CArray& x, std::size_t nfft, std::size_t segment, std::size_t overlap) {
            const auto v = to_vector(x);
            const auto p = normalize_psd(welch_power(v, nfft, segment, overlap), false);
            return py::make_tuple(to_numpy(p.freq), to_numpy(p.power_db));
        },
        py::arg("x"), py::arg("nfft"), py::arg("segment"), py::arg("overlap"));
    m.def(
        "intrinsic_interference",
        [](const PrototypeFilter& h, const std::string& waveform, int dn, int dm) {
            const auto t = intrinsic_interference(h, parse_waveform(waveform), {dn, dm});
            py::list entries;
            for (const auto& e : t.entries)
                entries.append(py::make_tuple(e.dn, e.dm, e.magnitude));
            py::dict out;
            out["entries"] = entries;
            out["pilot_real"] = t.pilot_real;
            out["pilot_imag"] = t.pilot_imag;
            out["interference_power"] = t.interference_power();
            return out;
        },
        py::arg("filter"), py::arg("waveform"), py::arg("dn") = 1, py::arg("dm") = 3);

    m.def("config_keys", &config_keys);
    m.def(
        "resolved_config",
        [](const std::map<std::string, py::object>& settings) { return format_config(to_config(settings).resolved()); },
        py::arg("settings"));
    m.def(
        "run",
        [](const std::string& command, const std::map<std::string, py::object>& settings, unsigned threads) {
            const auto cfg = to_config(settings);
            py::gil_scoped_release release;
            if (command == "ccdf")
                return run_ccdf(cfg, threads).files;
            if (command == "psd")
                return run_psd(cfg, threads).files;
            if (command == "frame")
                return run_frame(cfg).files;
            if (command == "filters")
                return run_filters(cfg).files;
            if (command == "interference")
                return run_interference(cfg).files;
            throw std::invalid_argument("unknown command '" + command + "'");
        },
        py::arg("command"), py::arg("settings") = std::map<std::string, py::object>{}, py::arg("threads") = 1);
}
