"""Regenerates the synthetic healthcare catalog/ontology/labels fixtures.

Run from the repository root: python3 fixtures/generate_healthcare.py
Per-dataset feature/annotation counts follow the published catalog summary;
all ontology structure and non-shared concept ids are invented.
"""
import json, random
rng = random.Random(20231)

summary_rows = [
 (1,"Cardiovascular Study",["Kaggle"],"Survey",16,15),
 (2,"Diagnosis of COVID-19 (Subset)",["Kaggle"],"EHR",19,18),
 (3,"Diabetes Health Indicators",["Kaggle"],"Survey",22,21),
 (4,"Diabetes 130 US",["UCI","OpenML","Kaggle"],"EHR",49,38),
 (5,"GOSSIS-1-eICU Model Ready",["PhysioNet"],"EHR",68,60),
 (6,"Stroke Prediction",["Kaggle"],"Survey",11,11),
 (7,"Heart Disease Indicators",["Kaggle"],"Survey",22,21),
 (8,"Heart Disease (Comprehensive)",["OpenML"],"EHR",12,11),
 (9,"HCV data",["UCI","OpenML","Kaggle"],"EHR",13,13),
 (10,"Hepatitis",["UCI","Kaggle"],"EHR",20,19),
 (11,"HiRID Preprocessed",["PhysioNet"],"EHR",18,17),
 (12,"Pima Indians Diabetes",["OpenML","Kaggle"],"EHR",9,8),
 (13,"ILPD",["UCI","OpenML","Kaggle"],"EHR",11,11),
 (14,"Breast Cancer",["UCI","OpenML"],"EHR",10,9),
 (15,"metaMIMIC",["Paper"],"EHR",184,175),
 (16,"Thyroid Disease",["UCI","OpenML","Kaggle"],"EHR",30,27),
]
AGE,SEX,DIAB,BIL,HBP = "397669002","263495000","73211009","359986008","38341003"
special = {i: [] for i in range(1,17)}
age_names = {i:"Patient age quantile" if i==1 else ("age" if i in (2,3,4,5,7) else "Age") for i in range(1,17) if i!=14}
for i,n in age_names.items(): special[i].append((n,AGE))
sex = {1:"Gender",2:"sex",3:"Sex",4:"gender",5:"Gender",6:"Gender",7:"Sex",9:"Sex",10:"sex",13:"Gender",15:"gender"}
for i,n in sex.items(): special[i].append((n,SEX))
diab = {1:"diabetes",3:"diabetes_diagnosed",5:"Outcome",7:"diabetes",12:"diabetes_mellitus",15:"Diabetes_binary"}
for i,n in diab.items(): special[i].append((n,DIAB))
bil = {5:["Total_Bilirubin"],9:["bilirubin"],10:["BIL"],13:["TB","Total_bilirubin_mg"],15:["bilirubin_min","bilirubin_max","bilirubin_mean"]}
for i,ns in bil.items():
    for n in ns: special[i].append((n,BIL))
hbp = {1:"HighBP",3:"HighBP",6:"prevalentHyp",7:"hypertensive_diagnosed",15:"hypertension"}
for i,n in hbp.items(): special[i].append((n,HBP))

bases = ["heart_rate","resp_rate","sbp","dbp","mbp","temperature","spo2","glucose","creatinine","bun",
 "sodium","potassium","chloride","bicarbonate","hemoglobin","hematocrit","platelets","wbc","albumin","alt",
 "ast","alp","inr","pt","ptt","lactate","ph","pco2","po2","calcium","magnesium","phosphate","troponin","ck",
 "ldh","crp","fibrinogen","ggt","cholesterol","triglycerides","hdl","ldl","urine_output","gcs","fio2","peep",
 "tidal_volume","weight","height","bmi","lymphocytes","neutrophils","monocytes","eosinophils","basophils","rdw"]
assert len(bases)==56
stats=["min","max","mean"]
generic = [f"{b}_{s}" for b in bases for s in stats]             # 168, metaMIMIC
extras = ["smoking_status","chest_pain_type","thyroxine","tsh","tumor_size","cigs_per_day","physical_activity"]
generic_all = generic + extras                                    # 175 names, one term each
def term_of(idx): return str(900100000 + idx*10 + 3)
name_term = {n: term_of(i) for i,n in enumerate(generic_all)}

unann_d130 = ["encounter_id","patient_nbr","admission_type_id","discharge_disposition_id","admission_source_id",
  "payer_code","medical_specialty","weight_code","examide","citoglipton","readmitted"]
unann_mimic = ["encounter_id","patient_nbr","admission_source_id","subject_id","hadm_id","stay_id","icu_type","first_careunit","los_icu"]
unann_pool = sorted(set(unann_d130)|set(unann_mimic))
assert len(unann_pool)==17

usage = {n:(1 if n in generic else 0) for n in generic_all}
datasets=[]
for (i,name,origin,cat,F,A) in summary_rows:
    feats = list(special[i])
    if i==15:
        for n in generic: feats.append((n,name_term[n]))
        for n in unann_mimic: feats.append((n,None))
    else:
        need = A - len(feats)
        assert need>=0,(i,need)
        chosen=[]
        # guarantee the extra names get used somewhere
        pending=[n for n in extras if usage[n]==0]
        for n in pending[:max(0,need//4)]:
            chosen.append(n)
        pool=[n for n in generic_all if usage[n]<4 and n not in chosen]
        rng.shuffle(pool)
        chosen += pool[:need-len(chosen)]
        assert len(chosen)==need
        for n in chosen: feats.append((n,name_term[n])); usage[n]+=1
        U=F-A
        src = unann_d130 if i==4 else unann_pool
        picks = src[:U] if i==4 else rng.sample(src,U)
        for n in picks: feats.append((n,None))
    assert len(feats)==F and sum(1 for f in feats if f[1])==A, i
    assert len({f[0] for f in feats})==F, i
    datasets.append({"id":str(i),"name":name,"origin":origin,"category":cat,
        "features":[{"name":n,"term":t} for n,t in feats]})
assert all(u>=1 for u in usage.values()), [n for n,u in usage.items() if u==0]
names={f["name"] for d in datasets for f in d["features"]}
print("distinct names",len(names))
cat={"ontology_version":"synthetic-healthcare-1 (SNOMED-CT-shaped stand-in)","datasets":datasets}
json.dump(cat,open("fixtures/healthcare_catalog.json","w"),indent=2)

# ontology: root -> top groups -> subgroups -> leaves, plus filler
edges=[]; labels={}
ROOT="900000001"; labels[ROOT]=("Synthetic clinical concept",[])
groups={"900000011":"Demographic attribute","900000021":"Clinical finding","900000031":"Laboratory measurement",
        "900000041":"Vital sign observable","900000051":"Respiratory support observable"}
for g,l in groups.items(): edges.append((g,ROOT)); labels[g]=(l,[])
sub={}
def add_sub(gid, sid, label):
    edges.append((sid,gid)); labels[sid]=(label,[]); sub[sid]=gid
add_sub("900000011","900000111","Personal characteristic")
add_sub("900000011","900000112","Lifestyle factor")
add_sub("900000021","900000211","Metabolic disorder")
add_sub("900000021","900000212","Cardiovascular disorder")
add_sub("900000021","900000213","Neoplastic finding")
add_sub("900000031","900000311","Chemistry measurement")
add_sub("900000031","900000312","Haematology measurement")
add_sub("900000031","900000313","Blood gas measurement")
add_sub("900000031","900000314","Liver function measurement")
add_sub("900000041","900000411","Haemodynamic observable")
add_sub("900000041","900000412","Body measurement")
add_sub("900000051","900000511","Ventilator setting")
edges += [(AGE,"900000111"),(SEX,"900000111"),(DIAB,"900000211"),(HBP,"900000212"),(BIL,"900000314")]
labels[AGE]=("Age",["Patient age quantile","age"])
labels[SEX]=("Gender",["Sex","sex"])
labels[DIAB]=("Diabetes mellitus",["diabetes","Diabetes_binary"])
labels[HBP]=("Hypertensive disorder",["hypertension","HighBP","prevalentHyp"])
labels[BIL]=("Total bilirubin measurement",["Total_Bilirubin","bilirubin","BIL"])
placement = {
 "heart_rate":"900000411","resp_rate":"900000411","sbp":"900000411","dbp":"900000411","mbp":"900000411",
 "temperature":"900000411","spo2":"900000313","urine_output":"900000411","gcs":"900000411",
 "weight":"900000412","height":"900000412","bmi":"900000412",
 "fio2":"900000511","peep":"900000511","tidal_volume":"900000511",
 "ph":"900000313","pco2":"900000313","po2":"900000313","lactate":"900000313","bicarbonate":"900000313",
 "hemoglobin":"900000312","hematocrit":"900000312","platelets":"900000312","wbc":"900000312","inr":"900000312",
 "pt":"900000312","ptt":"900000312","fibrinogen":"900000312","lymphocytes":"900000312","neutrophils":"900000312",
 "monocytes":"900000312","eosinophils":"900000312","basophils":"900000312","rdw":"900000312",
 "albumin":"900000314","alt":"900000314","ast":"900000314","alp":"900000314","ggt":"900000314","ldh":"900000314",
}
def pretty(b): return b.replace("_"," ").upper() if len(b)<=4 else b.replace("_"," ").capitalize()
statlabel={"min":"Minimum","max":"Maximum","mean":"Mean"}
for bi,b in enumerate(bases):
    parent = placement.get(b,"900000311")
    concept = str(900050000 + bi*10 + 7)
    edges.append((concept,parent)); labels[concept]=(f"{pretty(b)} measurement" if parent!="900000411" else f"{pretty(b)}",[b])
    for s in stats:
        n=f"{b}_{s}"; t=name_term[n]
        edges.append((t,concept)); labels[t]=(f"{statlabel[s]} {pretty(b).lower()}",[n])
# a few concepts with two parents
edges.append((str(900050000+bases.index("bmi")*10+7),"900000111"))
edges.append((str(900050000+bases.index("glucose")*10+7),"900000211"))
extra_parent={"smoking_status":"900000112","chest_pain_type":"900000212","thyroxine":"900000311","tsh":"900000311",
  "tumor_size":"900000213","cigs_per_day":"900000112","physical_activity":"900000112"}
for n,p in extra_parent.items():
    t=name_term[n]; edges.append((t,p)); labels[t]=(pretty(n),[n])
# filler so the ontology is larger than the annotated part
for k in range(400):
    fid=str(901000000+k*10+9)
    parent = rng.choice(list(sub.keys())) if k<60 else str(901000000+rng.randrange(0,k)*10+9) if rng.random()<0.7 else rng.choice(list(sub.keys()))
    edges.append((fid,parent)); labels[fid]=(f"Filler concept {k}",[])
with open("fixtures/healthcare_ontology.tsv","w") as f:
    f.write("# Synthetic SNOMED-CT-shaped is-a hierarchy for the bundled healthcare catalog.\n")
    f.write("# Concept ids other than the five shared-term ids are invented; structure is invented.\n")
    f.write("# child\tparent\n")
    for c,p in edges: f.write(f"{c}\t{p}\n")
with open("fixtures/healthcare_labels.tsv","w") as f:
    f.write("# id\tlabel\tsynonyms...\n")
    for t,(l,syn) in labels.items(): f.write("\t".join([t,l]+syn)+"\n")
print(len(edges),"edges",len(labels),"terms")
