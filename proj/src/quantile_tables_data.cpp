// Generated by tools/gen_quantile_tables: T=3 h=5e-04 reps=200000 seed=20070611.
#include "quantile_tables_data.hpp"

namespace splitset::detail {
namespace {

const double kLevels[] = {
    0.001, 0.0025, 0.005, 0.0075,
    0.01, 0.015, 0.02, 0.025,
    0.03, 0.04, 0.05, 0.06,
    0.07, 0.075, 0.08, 0.09,
    0.1, 0.125, 0.15, 0.175,
    0.2, 0.25, 0.3, 0.35,
    0.4, 0.45, 0.5, 0.55,
    0.6, 0.65, 0.7, 0.75,
    0.8, 0.825, 0.85, 0.875,
    0.9, 0.91, 0.92, 0.925,
    0.93, 0.94, 0.95, 0.96,
    0.97, 0.975, 0.98, 0.985,
    0.99, 0.9925, 0.995, 0.9975,
    0.999,
};

const double kChernoff[] = {
    -1.5050005000000002, -1.38450125, -1.2805, -1.213,
    -1.163505, -1.092, -1.0375, -0.9945,
    -0.9570000000000001, -0.8955000000000001, -0.844, -0.8,
    -0.762, -0.743, -0.726, -0.6935,
    -0.6635, -0.5995, -0.54, -0.4875,
    -0.4395, -0.353, -0.2755, -0.2025,
    -0.134, -0.0675, -0.001, 0.065,
    0.1325, 0.2025, 0.275, 0.3545,
    0.441, 0.488, 0.5405, 0.598,
    0.6655, 0.6950000000000001, 0.727, 0.7435,
    0.7615000000000001, 0.8, 0.846, 0.897,
    0.9605, 0.996, 1.0405, 1.0935074999999923,
    1.1675, 1.218, 1.28, 1.3820012500000012,
    1.5050000000000001,
};

const double kMaxQ1[] = {
    0.010841346580148873, 0.026891670486845543, 0.04467466582066665, 0.05738483467169212,
    0.06921156415120341, 0.08776976252156647, 0.10331201871937515, 0.1168093085342484,
    0.12970491105389004, 0.1522315770035926, 0.17191947471325367, 0.18983026226683172,
    0.2074384199124275, 0.21598247823127611, 0.22360771147239927, 0.23878335960297645,
    0.2542316561910533, 0.2880953902907085, 0.319301256330616, 0.34936686693726604,
    0.3786131866881508, 0.4338802736344692, 0.4875801634967742, 0.540313459189585,
    0.5945599510863132, 0.6485150184603978, 0.7031817687446665, 0.7611497313409751,
    0.8212618661393482, 0.8853015229486776, 0.9567120317702072, 1.037113562055358,
    1.1308258573646104, 1.1853872721152041, 1.246227075821124, 1.3151501575014446,
    1.3988014345151127, 1.4365004496976925, 1.4780156841314112, 1.5000555975313299,
    1.524218021711893, 1.5779201896570896, 1.638162156454618, 1.7093392017246147,
    1.7983948606574585, 1.8566135000970565, 1.9255754959083193, 2.0118634167192972,
    2.1340628034949947, 2.2142607530386362, 2.3345464878754933, 2.5308040195842074,
    2.766397599004109,
};

}  // namespace

const EmbeddedTableData kEmbeddedChernoff = {kLevels, kChernoff, 53, 20070611u, 200000, 3, 5e-04};
const EmbeddedTableData kEmbeddedMaxQ1 = {kLevels, kMaxQ1, 53, 20070611u, 200000, 3, 5e-04};

}  // namespace splitset::detail
