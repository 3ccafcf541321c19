// SPDX-License-Identifier: Apache-2.0
//
// cgb: cylindrical Galton board toolkit.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cgb/cli.hpp"

namespace {

void add_common(CLI::App* cmd, cgb::cli::CommonOptions& common, bool with_seed) {
    cmd->add_option("--out", common.out, "Output file (default: stdout)");
    cmd->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    if (with_seed) {
        cmd->add_option("--seed", common.seed, "64-bit seed");
    }
}

} // namespace

int main(int argc, char** argv) {
    using namespace cgb::cli;

    CLI::App app{"Cylindrical Galton board: lattices, wrapped distributions, simulation, diagnostics"};
    // -h is taken by the row-spacing flag
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    std::string preset_help = "Board preset:";
    for (const auto& name : cgb::preset_names()) {
        preset_help += " " + name;
    }

    LatticeOptions lattice;
    auto* lat = app.add_subcommand("lattice", "Export peg coordinates (row,col,theta,z,x,y)");
    add_common(lat, lattice.common, false);
    lat->add_option("--preset", lattice.preset, preset_help);
    lat->add_option("--M", lattice.slots, "Angular slots");
    lat->add_option("--n", lattice.rows, "Peg rows");
    lat->add_option("--R", lattice.radius, "Cylinder radius, cm");
    lat->add_option("--d", lattice.arc_spacing, "Arc spacing between pegs, cm");
    lat->add_option("--h", lattice.row_spacing, "Row spacing, cm");
    lat->add_option("--H", lattice.height, "Total height, cm (default n*h)");
    lat->add_option("--r-peg", lattice.peg_radius, "Peg radius, cm");
    lat->add_option("--r-ball", lattice.ball_radius, "Ball radius, cm");

    PmfOptions pmf;
    auto* pm = app.add_subcommand("pmf", "Exact wrapped binomial WB(n, M, p)");
    add_common(pm, pmf.common, false);
    pm->add_option("--n", pmf.trials, "Trials (rows)");
    pm->add_option("--M", pmf.slots, "Slots");
    pm->add_option("--p", pmf.p, "Right-deflection probability");
    pm->add_flag("--moments", pmf.moments, "Append alpha1, beta1, rho, mu");
    pm->add_flag("--centered", pmf.centered, "Label slots by centred angle in (-pi, pi]");

    WnOptions wn;
    auto* w = app.add_subcommand("wn", "Wrapped normal density samples and bin probabilities");
    add_common(w, wn.common, false);
    w->add_option("--mu", wn.mu, "Mean direction, radians");
    w->add_option("--sigma", wn.sigma, "Scale of the underlying normal (default 0.7)");
    w->add_option("--M", wn.slots, "Slots for bin probabilities");
    w->add_option("--samples", wn.samples, "Density sample count");
    w->add_option("--bins-out", wn.bins_out, "Bin probability file (default <out>.bins.csv)");
    w->add_flag("--centered", wn.centered, "Label slots by angle in (-pi, pi]");

    SimulateOptions sim;
    auto* s = app.add_subcommand("simulate", "Seeded Monte Carlo helical walk");
    add_common(s, sim.common, true);
    s->add_option("--n", sim.rows, "Rows");
    s->add_option("--M", sim.slots, "Slots");
    s->add_option("--p", sim.p, "Right-deflection probability");
    s->add_option("--balls", sim.balls, "Number of balls (default 2000)");
    s->add_flag("--planar", sim.planar, "Planar board with n+1 bins, no wrapping");
    s->add_option("--threads", sim.threads, "Worker threads (0 = hardware); output does not depend on it");
    s->add_option("--compare", sim.compare, "Append a comparison report")->check(CLI::IsMember({"exact", "wn"}));
    s->add_flag("--stats", sim.stats, "Record traces and report unwrapped mean/variance");

    SweepOptions sweep;
    auto* sw = app.add_subcommand("sweep", "TV to uniform and to the wrapped normal limit over n");
    add_common(sw, sweep.common, false);
    sw->add_option("--M", sweep.slots, "Slots");
    sw->add_option("--p", sweep.p, "Right-deflection probability");
    sw->add_option("--n", sweep.n_list, "Comma-separated row counts")->delimiter(',');

    PlotOptions plot;
    auto* pl = app.add_subcommand("plot", "Render pmf (ring) or density (cylinder) files to SVG");
    pl->add_option("--out", plot.common.out, "Output SVG (default: stdout)");
    pl->add_option("--input", plot.inputs, "Input file(s); ring style draws one ring per input")->required();
    pl->add_option("--style", plot.style, "ring or cylinder")->check(CLI::IsMember({"ring", "cylinder"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*lat) cmd_lattice(lattice);
        else if (*pm) cmd_pmf(pmf);
        else if (*w) cmd_wn(wn);
        else if (*s) cmd_simulate(sim);
        else if (*sw) cmd_sweep(sweep);
        else if (*pl) cmd_plot(plot);
    } catch (const cgb::ValidationError& e) {
        std::cerr << "error: validation: " << e.what() << '\n';
        return 2;
    } catch (const cgb::DomainError& e) {
        std::cerr << "error: domain: " << e.what() << '\n';
        return 2;
    } catch (const cgb::LookupError& e) {
        std::cerr << "error: lookup: " << e.what() << '\n';
        return 2;
    } catch (const cgb::ParseError& e) {
        std::cerr << "error: parse: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
