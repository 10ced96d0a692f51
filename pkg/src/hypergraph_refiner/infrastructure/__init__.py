"""基础设施：数据集、检查点与 CSV 文件格式。"""
