// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "regtrace/errors.hpp"

namespace regtrace {

std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
    return std::string(buf.data(), ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw ArgumentError("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

namespace {

struct Rgb {
    double r, g, b;
};

// Five-stop ramp from dark purple through teal to yellow.
constexpr std::array<Rgb, 5> kRamp{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string ramp_color(double t) {
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    const double pos = t * (kRamp.size() - 1);
    const std::size_t lo = std::min<std::size_t>(static_cast<std::size_t>(pos), kRamp.size() - 2);
    const double f = pos - static_cast<double>(lo);
    const auto mix = [f](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * f)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(kRamp[lo].r, kRamp[lo + 1].r), mix(kRamp[lo].g, kRamp[lo + 1].g),
                  mix(kRamp[lo].b, kRamp[lo + 1].b));
    return buf;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_scatter_svg(const std::filesystem::path& path, std::span<const RepresentationPoint> points,
                       std::span<const double> values, const ScatterStyle& style) {
    if (values.size() != points.size()) throw ArgumentError("write_scatter_svg: one value per point required");

    const double left = 60, right = 20, top = 36, bottom = 50;
    const double plot_w = style.width - left - right;
    const double plot_h = style.height - top - bottom;
    double max_x = 1.0, max_y = 1.0, max_v = 0.0;
    for (const auto& p : points) {
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    for (double v : values) max_v = std::max(max_v, v);
    const auto sx = [&](double x) { return left + x / max_x * plot_w; };
    const auto sy = [&](double y) { return top + plot_h - y / max_y * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty())
        svg << "<text x=\"" << style.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
            << escape_xml(style.title) << "</text>\n";

    svg << "<g stroke=\"black\">\n";
    svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\"" << fixed(left + plot_w)
        << "\" y2=\"" << fixed(top + plot_h) << "\"/>\n";
    svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left) << "\" y2=\""
        << fixed(top + plot_h) << "\"/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double xv = max_x * i / kTicks, yv = max_y * i / kTicks;
        svg << "<line x1=\"" << fixed(sx(xv)) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\"" << fixed(sx(xv))
            << "\" y2=\"" << fixed(top + plot_h + 4) << "\"/>\n";
        svg << "<line x1=\"" << fixed(left - 4) << "\" y1=\"" << fixed(sy(yv)) << "\" x2=\"" << fixed(left)
            << "\" y2=\"" << fixed(sy(yv)) << "\"/>\n";
    }
    svg << "</g>\n<g>\n";
    for (int i = 0; i <= kTicks; ++i) {
        const double xv = max_x * i / kTicks, yv = max_y * i / kTicks;
        svg << "<text x=\"" << fixed(sx(xv)) << "\" y=\"" << fixed(top + plot_h + 16)
            << "\" text-anchor=\"middle\">" << format_number(std::round(xv * 10) / 10) << "</text>\n";
        svg << "<text x=\"" << fixed(left - 7) << "\" y=\"" << fixed(sy(yv) + 4) << "\" text-anchor=\"end\">"
            << format_number(std::round(yv * 10) / 10) << "</text>\n";
    }
    svg << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << style.height - 12 << "\" text-anchor=\"middle\">"
        << escape_xml(style.x_label) << "</text>\n";
    svg << "<text transform=\"translate(16," << fixed(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape_xml(style.y_label) << "</text>\n";
    svg << "</g>\n<g fill-opacity=\"0.8\">\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double t = max_v > 0 ? values[i] / max_v : 0.0;
        svg << "<circle cx=\"" << fixed(sx(points[i].x)) << "\" cy=\"" << fixed(sy(points[i].y))
            << "\" r=\"3\" fill=\"" << ramp_color(t) << "\"/>\n";
    }
    svg << "</g>\n</svg>\n";

    std::ofstream out(path, std::ios::binary);
    out << svg.str();
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_run_metadata(const RunMetadata& meta, const std::filesystem::path& path) {
    const nlohmann::ordered_json j = {
        {"model", meta.model},
        {"repetition", meta.repetition},
        {"seed", meta.seed},
        {"epochs", meta.epochs},
        {"final_train_acc", meta.final_train_acc},
        {"final_test_acc", meta.final_test_acc},
        {"train_ids", meta.train_ids},
        {"test_ids", meta.test_ids},
        {"epoch_loss", meta.epoch_loss},
    };
    std::ofstream out(path, std::ios::binary);
    out << "RUN v1\n" << j.dump() << '\n';
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

RunMetadata read_run_metadata(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "cannot open run metadata");
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != "RUN v1") throw ParseError(path.string(), 1, "expected 'RUN v1' header");
    try {
        const auto j = nlohmann::json::parse(in);
        RunMetadata meta;
        meta.model = j.at("model").get<std::string>();
        meta.repetition = j.at("repetition").get<std::size_t>();
        meta.seed = j.at("seed").get<std::uint64_t>();
        meta.epochs = j.at("epochs").get<std::size_t>();
        meta.final_train_acc = j.at("final_train_acc").get<double>();
        meta.final_test_acc = j.at("final_test_acc").get<double>();
        meta.train_ids = j.at("train_ids").get<std::vector<std::size_t>>();
        meta.test_ids = j.at("test_ids").get<std::vector<std::size_t>>();
        meta.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
        return meta;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string(), 2, e.what());
    }
}

}  // namespace regtrace
