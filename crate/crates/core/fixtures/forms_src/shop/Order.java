package shop;

import shop.parts.Part;
import shop.parts.Spare;

public class Order extends Base implements Shape {
    private Widget widget;

    public void process(Gadget gadget) throws Failure {
        Part part = new Part();
        widget.refresh();
        int n = widget.count;
    }
}
