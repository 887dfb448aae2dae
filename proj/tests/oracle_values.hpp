// Generated by tests/oracles/chern_oracle.py; do not edit.
#pragma once

#include <complex>

namespace oracle {

using C = std::complex<double>;

// Evaluation point (0.1+0.05i, -0.07+0.02i).
inline constexpr double kPoint[4] = {0.1, 0.05, -0.07, 0.02};

// example_2_3 b=1
inline const C ex23_R[16] = {C{1.0125273631907119, 0}, C{0.012832578244120482, -0.011763196723777108}, C{0.012832578244120482, 0.011763196723777108}, C{5.359419365504885, 0}, C{0.011703744830668645, -0.010728432761446258}, C{-1.236341357590107e-05, 0.00014191048626251664}, C{-2.1120285026781627, 0}, C{-0.032327853818266118, 0.029633866000077277}, C{0.011703744830668645, 0.010728432761446258}, C{-2.1120285026781627, 0}, C{-1.236341357590107e-05, -0.00014191048626251664}, C{-0.032327853818266118, -0.029633866000077277}, C{-1.9262413367142146, 0}, C{0.012739691380385016, -0.011678050432019598}, C{0.012739691380385016, 0.011678050432019598}, C{1.0056870949893535, 0}};
inline const C ex23_eta[2] = {C{0.7511257533108523, -0.37556287665542615}, C{-0.013169723156938096, -0.0037627780448394599}};
inline const C ex23_ric1[4] = {C{6.76620732128948, 0}, C{-0.050208630317734634, 0.046024577791256738}, C{-0.050208630317734634, -0.046024577791256738}, C{-0.8507138182105205, 0}};
inline const C ex23_ric2[4] = {C{-1.0516282549146967, 0}, C{-0.00071819177241096849, 0.00065834245804338547}, C{-0.00071819177241096849, -0.00065834245804338547}, C{6.4487556702526732, 0}};
inline const C ex23_ric3[4] = {C{-1.2509579191711173, -2.7105054312137611e-20}, C{0.047311474179789662, -0.043368851331473848}, C{0.0005473352866264148, 0.0005017240127408798}, C{-1.0379776463550396, 0}};

// example_2_2 eps=0.3
inline const C ex22_R[16] = {C{0.70614737518058224, 0}, C{-0.0070772875419752102, 0.0064875135801439436}, C{-0.0070772875419752102, -0.0064875135801439436}, C{-0.97261457796568107, 1.6313261169996311e-55}, C{0.0040643905873232753, -0.0037256913717130013}, C{4.7653598778886784e-06, -5.4698043815765615e-05}, C{1.6703241133292688, 5.4210108624275222e-20}, C{0.0041001929432754134, -0.0037585101980024621}, C{0.0040643905873232753, 0.0037256913717130013}, C{1.6703241133292688, -5.4210108624275222e-20}, C{4.7653598778886784e-06, 5.4698043815765615e-05}, C{0.0041001929432754134, 0.0037585101980024617}, C{-0.95924456421052295, -3.0476763869394919e-23}, C{-0.0070414851860230773, 0.0064546947538544871}, C{-0.0070414851860230755, -0.0064546947538544853}, C{0.70257486166214245, 0}};
inline const C ex22_eta[2] = {C{-0.26527805069758309, 0.13263902534879154}, C{0.18569463548830811, 0.053055610139516603}};
inline const C ex22_ric1[4] = {C{-0.25533211002396516, -4.0605824170512512e-21}, C{-0.0088066279423181047, 0.0080727422804582633}, C{-0.0088066279423181047, -0.0080727422804582651}, C{-0.26590006355474671, 1.903791454393818e-20}};
inline const C ex22_ric2[4] = {C{-0.24249221727584191, -4.0907993792666823e-21}, C{-0.031035707619771438, 0.028449398651457149}, C{-0.031035707619771435, -0.028449398651457149}, C{-0.27973506641956725, 1.2369121092862941e-20}};
inline const C ex22_ric3[4] = {C{2.3648685616824627, 5.6463671302387013e-20}, C{0.0068316929869951049, -0.0062623852380788436}, C{0.0068316929869950997, 0.0062623852380788393}, C{2.3730665932668566, -5.723679903507032e-20}};

// dual eps=0.3
inline const C dual_R[16] = {C{-0.72631265584534055, 8.3134685855841164e-23}, C{-0.012741021070852654, 0.011679269314948266}, C{-0.012741021070852654, -0.011679269314948266}, C{0.97108149998778148, 3.2542359407354253e-20}, C{0.013196339573192556, -0.012096644608759843}, C{-2.3950107203856977e-05, 0.00027490557833992352}, C{-1.712959328005494, -4.0250477432774384e-20}, C{0.013016401376460969, -0.011931701261755889}, C{0.013196339573192556, 0.012096644608759843}, C{-1.712959328005494, -3.5288576726316966e-20}, C{-2.3950107203856967e-05, -0.00027490557833992352}, C{0.013016401376460969, 0.011931701261755887}, C{1.0022063327606356, 3.2718992531705136e-20}, C{-0.012920959267584239, 0.011844212661952219}, C{-0.012920959267584239, -0.011844212661952219}, C{-0.72598219947861053, 3.5412217997196065e-23}};
inline const C dual_eta[2] = {C{0.27039605566315217, -0.13519802783157608}, C{-0.18927723896420651, -0.054079211132630436}};
inline const C dual_ric1[4] = {C{0.25533211002396494, -7.7463268504718854e-21}, C{0.0088066279423181064, -0.0080727422804582685}, C{0.0088066279423181099, 0.0080727422804582651}, C{0.26590006355474671, 5.5367811867265356e-21}};
inline const C dual_ric2[4] = {C{0.28770426182440423, 6.019449465938607e-20}, C{-0.043206598851611509, 0.039606048947310547}, C{-0.043206598851611502, -0.039606048947310547}, C{0.23585634320247095, 5.9570866070929884e-20}};
inline const C dual_ric3[4] = {C{-2.4518145709736152, -6.7626485570356434e-20}, C{0.01033596763802626, -0.0094746370015240684}, C{0.010335967638026263, 0.009474637001524077}, C{-2.4394114098079838, -3.5131107645217782e-20}};

} // namespace oracle
