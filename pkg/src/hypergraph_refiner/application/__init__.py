"""应用层：训练、评测、数据生成与实验编排。"""
